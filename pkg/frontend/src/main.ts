// Application bootstrap: session form, board, label panel, NEXT/export
// controls. All state lives on the server; this file only wires DOM
// events to API calls and re-renders from responses.

import { ApiClient, ApiError } from "./api.js";
import { occupiedCount, optimisticMove, renderBoard, renderLabelPanel } from "./board.js";
import { browserDownload, browserExportDeps, exportBoardPng } from "./exportPng.js";
import type { SessionState } from "./types.js";

function apiBaseUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  return fromQuery ?? "";
}

const api = new ApiClient(apiBaseUrl());

let state: SessionState | null = null;
let selectedImage: string | null = null;
let pending = false;

const el = {
  form: document.getElementById("session-form") as HTMLFormElement,
  kind: document.getElementById("kind") as HTMLSelectElement,
  w1: document.getElementById("w1") as HTMLInputElement,
  w2: document.getElementById("w2") as HTMLInputElement,
  start: document.getElementById("start") as HTMLButtonElement,
  next: document.getElementById("next") as HTMLButtonElement,
  exportBtn: document.getElementById("export") as HTMLButtonElement,
  board: document.getElementById("board") as HTMLElement,
  labels: document.getElementById("labels") as HTMLElement,
  status: document.getElementById("status") as HTMLElement,
  query: document.getElementById("query") as HTMLElement,
  toast: document.getElementById("toast") as HTMLElement,
};

function toast(message: string): void {
  el.toast.textContent = message;
  el.toast.classList.add("visible");
  window.setTimeout(() => el.toast.classList.remove("visible"), 2600);
}

function render(): void {
  if (!state) return;
  renderBoard(el.board, state, (id) => api.imageUrl(id), handlers, selectedImage);
  renderLabelPanel(el.labels, state, selectedImage, {
    onStrike: (imageId, label) => void strike(imageId, label),
  });
  el.query.textContent = `query: ${state.query.join(" + ")}`;
  el.status.textContent =
    `${state.kind} session ${state.id} — iteration ${state.iteration_count}` +
    (state.negative_words.length ? ` — struck: ${state.negative_words.join(", ")}` : "");
  el.next.disabled = pending || !state.capabilities.next;
  el.exportBtn.disabled =
    pending || !state.capabilities.export || occupiedCount(state.board.cells) === 0;
}

function setState(next: SessionState): void {
  state = next;
  if (selectedImage && !next.board.cells.some((c) => c.image?.id === selectedImage)) {
    selectedImage = null;
  }
  render();
}

async function guarded(work: () => Promise<void>): Promise<void> {
  if (pending) return;
  pending = true;
  render();
  try {
    await work();
  } catch (err) {
    if (err instanceof ApiError) toast(err.message);
    else toast(String(err));
    if (state) setState(await api.getSession(state.id)); // reconcile
  } finally {
    pending = false;
    render();
  }
}

const handlers = {
  onMove(imageId: string, to: [number, number]): void {
    if (!state || !state.capabilities.move) return;
    // Optimistic swap; the server response (or an error reload)
    // reconciles the board afterwards.
    state.board.cells = optimisticMove(state.board.cells, imageId, to);
    render();
    void guarded(async () => {
      setState(await api.applyAction(state!.id, { type: "move", image: imageId, to }));
    });
  },
  onDelete(imageId: string): void {
    void guarded(async () => {
      setState(await api.applyAction(state!.id, { type: "delete", image: imageId }));
    });
  },
  onSelect(imageId: string): void {
    selectedImage = selectedImage === imageId ? null : imageId;
    render();
  },
};

async function strike(imageId: string, label: string): Promise<void> {
  await guarded(async () => {
    setState(await api.applyAction(state!.id, { type: "strike", image: imageId, label }));
  });
}

el.form.addEventListener("submit", (ev) => {
  ev.preventDefault();
  void guarded(async () => {
    selectedImage = null;
    setState(
      await api.createSession({
        kind: el.kind.value,
        w1: el.w1.value.trim().toLowerCase(),
        w2: el.w2.value.trim().toLowerCase(),
      }),
    );
  });
});

el.next.addEventListener("click", () => {
  void guarded(async () => {
    const { session } = await api.next(state!.id);
    setState(session);
  });
});

el.exportBtn.addEventListener("click", () => {
  void guarded(async () => {
    const doc = await api.exportBoard(state!.id);
    await exportBoardPng(doc, browserExportDeps((id) => api.imageUrl(id)), browserDownload);
    toast("board downloaded as PNG");
  });
});
