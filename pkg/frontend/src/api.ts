// Fetch client for the session service. The fetch function is
// injectable so tests can stub the transport.

import type { Action, BoardDocument, IterationRecord, SessionState } from "./types.js";

export class ApiError extends Error {
  status: number;

  constructor(status: number, message: string) {
    super(message);
    this.status = status;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private baseUrl: string;
  private fetchFn: FetchLike;

  constructor(baseUrl = "", fetchFn: FetchLike = (...args) => fetch(...args)) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  imageUrl(imageId: string): string {
    return `${this.baseUrl}/images/${encodeURIComponent(imageId)}`;
  }

  async createSession(req: {
    kind: string;
    w1: string;
    w2: string;
    seed?: number;
    config?: Record<string, unknown>;
  }): Promise<SessionState> {
    return this.request("POST", "/sessions", req);
  }

  async getSession(id: string): Promise<SessionState> {
    return this.request("GET", `/sessions/${encodeURIComponent(id)}`);
  }

  async applyAction(id: string, action: Action): Promise<SessionState> {
    return this.request("POST", `/sessions/${encodeURIComponent(id)}/actions`, action);
  }

  async next(id: string): Promise<{ session: SessionState; record: IterationRecord }> {
    return this.request("POST", `/sessions/${encodeURIComponent(id)}/next`);
  }

  async exportBoard(id: string): Promise<BoardDocument> {
    return this.request("GET", `/sessions/${encodeURIComponent(id)}/export`);
  }

  async log(id: string): Promise<IterationRecord[]> {
    const resp = await this.fetchFn(`${this.baseUrl}/sessions/${encodeURIComponent(id)}/log`);
    if (!resp.ok) throw new ApiError(resp.status, await safeError(resp));
    const text = await resp.text();
    return text
      .split("\n")
      .filter((line) => line.trim().length > 0)
      .map((line) => JSON.parse(line) as IterationRecord);
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!resp.ok) throw new ApiError(resp.status, await safeError(resp));
    return (await resp.json()) as T;
  }
}

async function safeError(resp: Response): Promise<string> {
  try {
    const doc = (await resp.json()) as { error?: string };
    if (doc.error) return doc.error;
  } catch {
    // fall through to the status line
  }
  return `HTTP ${resp.status}`;
}
