// Shapes mirrored from the session HTTP API. The client renders server
// state verbatim and never computes semantics on its own.

export interface LabelScore {
  label: string;
  score: number;
}

export interface BoardImage {
  id: string;
  uri: string;
  field: string;
  source_rank: number;
  labels: LabelScore[];
}

export interface BoardCell {
  x: number;
  y: number;
  image: BoardImage | null;
}

export interface Capabilities {
  move: boolean;
  delete: boolean;
  strike: boolean;
  next: boolean;
  export: boolean;
}

export interface SessionState {
  id: string;
  kind: string;
  w1: string;
  w2: string;
  query: string[];
  negative_words: string[];
  iteration_count: number;
  seed: number;
  created_at: string;
  capabilities: Capabilities;
  board: { cells: BoardCell[] };
}

export interface IterationRecord {
  session_id: string;
  iteration_id: number;
  kind: string;
  w1: string;
  w2: string;
  query: string[];
  images: Array<{
    id: string;
    x: number;
    y: number;
    labels: string[];
    scores: number[];
    cos_w1: number | null;
    cos_w2: number | null;
  }>;
  cos_w1_u: number | null;
  cos_w2_u: number | null;
  top_n_words: string[];
  negative_words: string[];
  timestamp: string;
}

export interface ExportCell {
  x: number;
  y: number;
  image: { id: string; uri: string } | null;
}

export interface BoardDocument {
  session_id: string;
  kind: string;
  axis: { w1: string; w2: string };
  query: string[];
  negative_words: string[];
  iteration_count: number;
  cells: ExportCell[];
  exported_at: string;
}

export type Action =
  | { type: "move"; image: string; to: [number, number] }
  | { type: "delete"; image: string }
  | { type: "strike"; image: string; label: string };
