// Board view-model helpers plus DOM rendering. The pure helpers are
// exported separately so they can be tested without a browser.

import type { BoardCell, Capabilities, SessionState } from "./types.js";

/** Cells in reading order: top row (y=3) first, x left to right. */
export function orderedCells(cells: BoardCell[]): BoardCell[] {
  return [...cells].sort((a, b) => b.y - a.y || a.x - b.x);
}

export function cellAt(cells: BoardCell[], x: number, y: number): BoardCell | undefined {
  return cells.find((c) => c.x === x && c.y === y);
}

/**
 * The swap semantics the server applies: moving onto an occupied cell
 * exchanges the two images. Used for optimistic updates; the server
 * response reconciles afterwards.
 */
export function optimisticMove(cells: BoardCell[], imageId: string, to: [number, number]): BoardCell[] {
  const next = cells.map((c) => ({ ...c, image: c.image }));
  const from = next.find((c) => c.image?.id === imageId);
  const target = next.find((c) => c.x === to[0] && c.y === to[1]);
  if (!from || !target) return next;
  const moved = from.image;
  from.image = target.image;
  target.image = moved;
  return next;
}

export function occupiedCount(cells: BoardCell[]): number {
  return cells.filter((c) => c.image !== null).length;
}

export interface BoardHandlers {
  onMove(imageId: string, to: [number, number]): void;
  onDelete(imageId: string): void;
  onSelect(imageId: string): void;
}

/** Renders the 3x3 grid as the upper-right quadrant of the concept
 * space: the y-axis word sits top-left, the x-axis word bottom-right. */
export function renderBoard(
  container: HTMLElement,
  state: SessionState,
  imageUrl: (id: string) => string,
  handlers: BoardHandlers,
  selectedImage: string | null,
): void {
  const caps = state.capabilities;
  container.innerHTML = "";
  container.classList.add("board-wrap");

  const axisY = document.createElement("div");
  axisY.className = "axis axis-y";
  axisY.textContent = `↑ ${state.w1}`;
  container.appendChild(axisY);

  const grid = document.createElement("div");
  grid.className = "board-grid";
  for (const cell of orderedCells(state.board.cells)) {
    grid.appendChild(renderCell(cell, caps, imageUrl, handlers, selectedImage));
  }
  container.appendChild(grid);

  const axisX = document.createElement("div");
  axisX.className = "axis axis-x";
  axisX.textContent = `${state.w2} →`;
  container.appendChild(axisX);
}

function renderCell(
  cell: BoardCell,
  caps: Capabilities,
  imageUrl: (id: string) => string,
  handlers: BoardHandlers,
  selectedImage: string | null,
): HTMLElement {
  const el = document.createElement("div");
  el.className = "cell";
  el.dataset.x = String(cell.x);
  el.dataset.y = String(cell.y);

  if (caps.move) {
    el.addEventListener("dragover", (ev) => ev.preventDefault());
    el.addEventListener("drop", (ev) => {
      ev.preventDefault();
      const imageId = ev.dataTransfer?.getData("text/image-id");
      if (imageId) handlers.onMove(imageId, [cell.x, cell.y]);
    });
  }

  if (!cell.image) {
    el.classList.add("empty");
    return el;
  }

  const image = cell.image;
  const img = document.createElement("img");
  img.src = imageUrl(image.id);
  img.alt = image.labels.map((l) => l.label).join(", ");
  img.draggable = caps.move;
  if (caps.move) {
    img.addEventListener("dragstart", (ev) => {
      ev.dataTransfer?.setData("text/image-id", image.id);
    });
  } else {
    img.classList.add("drag-disabled");
  }
  img.addEventListener("click", () => handlers.onSelect(image.id));
  if (selectedImage === image.id) el.classList.add("selected");
  el.appendChild(img);

  if (caps.delete) {
    const trash = document.createElement("button");
    trash.className = "trash";
    trash.textContent = "\u{1F5D1}";
    trash.title = "remove this image";
    trash.addEventListener("click", (ev) => {
      ev.stopPropagation();
      handlers.onDelete(image.id);
    });
    el.appendChild(trash);
  }
  return el;
}

export interface LabelHandlers {
  onStrike(imageId: string, label: string): void;
}

/** Side panel: the selected image's labels, struck ones crossed out. */
export function renderLabelPanel(
  container: HTMLElement,
  state: SessionState,
  selectedImage: string | null,
  handlers: LabelHandlers,
): void {
  container.innerHTML = "";
  const title = document.createElement("h3");
  const negatives = new Set(state.negative_words);
  if (!selectedImage) {
    title.textContent = state.capabilities.strike
      ? "click an image to see its labels"
      : "labels";
    container.appendChild(title);
    return;
  }
  const cell = state.board.cells.find((c) => c.image?.id === selectedImage);
  if (!cell || !cell.image) {
    title.textContent = "labels";
    container.appendChild(title);
    return;
  }
  title.textContent = `labels of ${selectedImage}`;
  container.appendChild(title);
  const list = document.createElement("ul");
  list.className = "labels";
  for (const ls of cell.image.labels) {
    const item = document.createElement("li");
    item.textContent = `${ls.label} (${ls.score.toFixed(2)})`;
    if (negatives.has(ls.label.toLowerCase())) item.classList.add("struck");
    if (state.capabilities.strike) {
      item.classList.add("strikeable");
      item.title = "strike this label out of future searches";
      item.addEventListener("click", () => handlers.onStrike(selectedImage, ls.label));
    }
    list.appendChild(item);
  }
  container.appendChild(list);
}
