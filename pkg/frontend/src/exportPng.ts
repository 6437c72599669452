// Client-side PNG export: composite the 3x3 board with its axis words
// onto a canvas. Canvas creation and image loading are injectable so
// the composition logic is testable without a browser.

import type { BoardDocument, ExportCell } from "./types.js";

export interface Context2DLike {
  fillStyle: string;
  strokeStyle: string;
  font: string;
  textAlign: string;
  textBaseline: string;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  fillText(text: string, x: number, y: number): void;
  drawImage(image: unknown, dx: number, dy: number, dw: number, dh: number): void;
  save(): void;
  restore(): void;
  translate(x: number, y: number): void;
  rotate(angle: number): void;
}

export interface CanvasLike {
  width: number;
  height: number;
  getContext(kind: "2d"): Context2DLike | null;
  toBlob(callback: (blob: Blob | null) => void, type?: string): void;
}

export interface ExportDeps {
  createCanvas(width: number, height: number): CanvasLike;
  loadImage(imageId: string): Promise<unknown>;
}

export interface CellRect {
  x: number;
  y: number;
  px: number;
  py: number;
  size: number;
}

export interface BoardLayout {
  width: number;
  height: number;
  cells: CellRect[];
  axisYLabel: { text: string; px: number; py: number };
  axisXLabel: { text: string; px: number; py: number };
}

export const CELL_SIZE = 200;
export const CELL_GAP = 8;
export const MARGIN = 56;

/** Pixel layout for a board: y grows upward, so grid y=3 is the top row. */
export function computeLayout(w1: string, w2: string): BoardLayout {
  const span = 3 * CELL_SIZE + 2 * CELL_GAP;
  const width = MARGIN + span + MARGIN / 2;
  const height = MARGIN / 2 + span + MARGIN;
  const cells: CellRect[] = [];
  for (let y = 1; y <= 3; y++) {
    for (let x = 1; x <= 3; x++) {
      cells.push({
        x,
        y,
        px: MARGIN + (x - 1) * (CELL_SIZE + CELL_GAP),
        py: MARGIN / 2 + (3 - y) * (CELL_SIZE + CELL_GAP),
        size: CELL_SIZE,
      });
    }
  }
  return {
    width,
    height,
    cells,
    axisYLabel: { text: w1, px: MARGIN / 2, py: MARGIN / 2 + span / 2 },
    axisXLabel: { text: w2, px: MARGIN + span / 2, py: height - MARGIN / 2 },
  };
}

export function rectFor(layout: BoardLayout, x: number, y: number): CellRect {
  const rect = layout.cells.find((c) => c.x === x && c.y === y);
  if (!rect) throw new Error(`no cell (${x}, ${y}) in layout`);
  return rect;
}

/** Draws the full composite and returns the canvas. */
export async function composeBoard(board: BoardDocument, deps: ExportDeps): Promise<CanvasLike> {
  const layout = computeLayout(board.axis.w1, board.axis.w2);
  const canvas = deps.createCanvas(layout.width, layout.height);
  const ctx = canvas.getContext("2d");
  if (!ctx) throw new Error("2d canvas context unavailable");

  ctx.fillStyle = "#ffffff";
  ctx.fillRect(0, 0, layout.width, layout.height);

  const byCoord = new Map<string, ExportCell>();
  for (const cell of board.cells) byCoord.set(`${cell.x},${cell.y}`, cell);

  for (const rect of layout.cells) {
    const cell = byCoord.get(`${rect.x},${rect.y}`);
    if (cell?.image) {
      // The document's uri is a server-side path; fetch by image id.
      const bitmap = await deps.loadImage(cell.image.id);
      ctx.drawImage(bitmap, rect.px, rect.py, rect.size, rect.size);
    } else {
      ctx.fillStyle = "#f2f2f2";
      ctx.fillRect(rect.px, rect.py, rect.size, rect.size);
    }
    ctx.strokeStyle = "#cccccc";
    ctx.strokeRect(rect.px, rect.py, rect.size, rect.size);
  }

  ctx.fillStyle = "#222222";
  ctx.font = "20px sans-serif";
  ctx.textAlign = "center";
  ctx.textBaseline = "middle";
  ctx.save();
  ctx.translate(layout.axisYLabel.px, layout.axisYLabel.py);
  ctx.rotate(-Math.PI / 2);
  ctx.fillText(layout.axisYLabel.text, 0, 0);
  ctx.restore();
  ctx.fillText(layout.axisXLabel.text, layout.axisXLabel.px, layout.axisXLabel.py);
  return canvas;
}

export function canvasToPngBlob(canvas: CanvasLike): Promise<Blob> {
  return new Promise((resolve, reject) => {
    canvas.toBlob((blob) => {
      if (blob) resolve(blob);
      else reject(new Error("PNG encoding failed"));
    }, "image/png");
  });
}

/** Composites the board and hands the PNG blob to a download sink. */
export async function exportBoardPng(
  board: BoardDocument,
  deps: ExportDeps,
  download: (blob: Blob, filename: string) => void,
): Promise<void> {
  const canvas = await composeBoard(board, deps);
  const blob = await canvasToPngBlob(canvas);
  download(blob, `moodboard-${board.session_id}.png`);
}

/** Browser wiring for the injectable pieces. */
export function browserExportDeps(imageUrl: (id: string) => string): ExportDeps {
  return {
    createCanvas(width, height) {
      const canvas = document.createElement("canvas");
      canvas.width = width;
      canvas.height = height;
      return canvas as unknown as CanvasLike;
    },
    loadImage(imageId) {
      return new Promise((resolve, reject) => {
        const img = new Image();
        img.crossOrigin = "anonymous";
        img.onload = () => resolve(img);
        img.onerror = () => reject(new Error(`cannot load image ${imageId}`));
        img.src = imageUrl(String(imageId));
      });
    },
  };
}

export function browserDownload(blob: Blob, filename: string): void {
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement("a");
  anchor.href = url;
  anchor.download = filename;
  anchor.click();
  URL.revokeObjectURL(url);
}
