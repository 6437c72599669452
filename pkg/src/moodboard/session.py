"""Session lifecycle: creation, user actions, iteration logging, export.

A session owns one board and appends one JSON record per iteration to
its log; the record snapshots the board at iteration close with enough
detail (labels, scores, cell coordinates, negative words) to recompute
the board vector offline. Everything a session does is deterministic
given (kind, axis words, seed, config, fixtures) except timestamps.
"""

from __future__ import annotations

import json
import time
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterator

import numpy as np

from . import board as board_ops
from . import embedding, feedback
from .board import BoardState, GridCoord
from .config import EngineConfig, config_from_dict
from .embedding import EmbeddingStore
from .errors import (
    AllLabelsOOV,
    EmptyBoardError,
    ImageNotFoundError,
    RecordParseError,
    SessionNotFoundError,
    UnsupportedActionError,
    ValidationError,
    VectorDomainError,
)
from .feedback import CAPABILITIES, AlgorithmKind, ConceptSpace
from .imagery import ImageSource, LabeledImage, normalize_label, resolve_label_vector


@dataclass(frozen=True)
class RecordImage:
    """One board image as logged: identity, cell, labels, axis cosines."""

    id: str
    x: int
    y: int
    field: str
    uri: str
    source_rank: int
    labels: list[str]
    scores: list[float]
    cos_w1: float | None
    cos_w2: float | None

    def to_dict(self) -> dict:
        return {
            "id": self.id, "x": self.x, "y": self.y,
            "field": self.field, "uri": self.uri, "source_rank": self.source_rank,
            "labels": list(self.labels), "scores": list(self.scores),
            "cos_w1": self.cos_w1, "cos_w2": self.cos_w2,
        }


@dataclass(frozen=True)
class IterationRecord:
    """One iteration's full log entry; one JSON line in records.jsonl."""

    session_id: str
    iteration_id: int
    kind: str
    w1: str
    w2: str
    query: list[str]
    images: list[RecordImage]
    cos_w1_u: float | None
    cos_w2_u: float | None
    top_n_words: list[str]
    negative_words: list[str]
    timestamp: str

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "iteration_id": self.iteration_id,
            "kind": self.kind,
            "w1": self.w1,
            "w2": self.w2,
            "query": list(self.query),
            "images": [img.to_dict() for img in self.images],
            "cos_w1_u": self.cos_w1_u,
            "cos_w2_u": self.cos_w2_u,
            "top_n_words": list(self.top_n_words),
            "negative_words": list(self.negative_words),
            "timestamp": self.timestamp,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)

    @classmethod
    def from_dict(cls, doc: dict, index: int = -1) -> "IterationRecord":
        try:
            images = [
                RecordImage(
                    id=img["id"], x=int(img["x"]), y=int(img["y"]),
                    field=img.get("field", "industrial_design"),
                    uri=img.get("uri", ""),
                    source_rank=int(img.get("source_rank", 1)),
                    labels=list(img["labels"]), scores=[float(s) for s in img["scores"]],
                    cos_w1=img.get("cos_w1"), cos_w2=img.get("cos_w2"),
                )
                for img in doc["images"]
            ]
            return cls(
                session_id=doc["session_id"],
                iteration_id=int(doc["iteration_id"]),
                kind=doc.get("kind", ""),
                w1=doc["w1"],
                w2=doc["w2"],
                query=list(doc["query"]),
                images=images,
                cos_w1_u=doc.get("cos_w1_u"),
                cos_w2_u=doc.get("cos_w2_u"),
                top_n_words=list(doc.get("top_n_words", [])),
                negative_words=list(doc.get("negative_words", [])),
                timestamp=doc.get("timestamp", ""),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise RecordParseError(index, f"{exc.__class__.__name__}: {exc}") from exc


@dataclass
class Session:
    id: str
    kind: AlgorithmKind
    space: ConceptSpace
    board: BoardState
    config: EngineConfig
    rng_seed: int
    created_at: str
    seen_ids: set[str] = field(default_factory=set)
    images: dict[str, LabeledImage] = field(default_factory=dict)
    iteration_count: int = 0
    records: list[IterationRecord] = field(default_factory=list)
    journal: list[dict] = field(default_factory=list)
    # Board vectors computed live at each iteration close; analysis
    # recomputation from the log must agree with these.
    u_history: list[np.ndarray | None] = field(default_factory=list)
    export_count: int = 0

    def capabilities(self) -> frozenset[str]:
        return CAPABILITIES[self.kind]


class SessionStorage:
    """One directory per session holding records, journal, and exports."""

    def __init__(self, base_dir: str | Path):
        self.base_dir = Path(base_dir)
        self.base_dir.mkdir(parents=True, exist_ok=True)

    def dir_for(self, session_id: str) -> Path:
        d = self.base_dir / session_id
        d.mkdir(parents=True, exist_ok=True)
        return d

    def append_record(self, record: IterationRecord) -> None:
        path = self.dir_for(record.session_id) / "records.jsonl"
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(record.to_json() + "\n")
            fh.flush()

    def append_journal(self, session_id: str, entry: dict) -> None:
        path = self.dir_for(session_id) / "journal.jsonl"
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry, ensure_ascii=False) + "\n")
            fh.flush()

    def write_export(self, session_id: str, seq: int, doc: dict) -> Path:
        d = self.dir_for(session_id) / "exports"
        d.mkdir(exist_ok=True)
        path = d / f"export-{seq:03d}.json"
        path.write_text(json.dumps(doc, ensure_ascii=False, indent=2), encoding="utf-8")
        return path

    def record_lines(self, session_id: str) -> Iterator[str]:
        path = self.base_dir / session_id / "records.jsonl"
        if not path.is_file():
            return iter(())
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
        return iter(lines)


def parse_coord(value) -> GridCoord:
    if (not isinstance(value, (list, tuple))) or len(value) != 2:
        raise ValidationError(f"cell must be an [x, y] pair, got {value!r}")
    try:
        return GridCoord(int(value[0]), int(value[1]))
    except (TypeError, ValueError):
        raise ValidationError(f"cell must hold integers, got {value!r}") from None


class SessionEngine:
    """Owns sessions and wires the embedding store, image source, and
    storage together. Per-session mutations are serialized by the
    caller (one writer per session id)."""

    def __init__(
        self,
        store: EmbeddingStore,
        source: ImageSource,
        config: EngineConfig | None = None,
        storage: SessionStorage | None = None,
        clock=time.time,
    ):
        self.store = store
        self.source = source
        self.config = config or EngineConfig()
        self.storage = storage
        self.clock = clock
        self.sessions: dict[str, Session] = {}
        self._last_ts = 0.0

    # -- lifecycle ---------------------------------------------------

    def create_session(
        self,
        kind: str | AlgorithmKind,
        w1: str,
        w2: str,
        seed: int | None = None,
        config_overrides: dict | None = None,
        session_id: str | None = None,
    ) -> Session:
        if isinstance(kind, str):
            try:
                kind = AlgorithmKind.parse(kind)
            except ValueError as exc:
                raise ValidationError(str(exc)) from None
        for word in (w1, w2):
            if word not in self.store:
                raise ValidationError(f"axis word not in vocabulary: {word!r}")
        if w1 == w2:
            raise ValidationError("axis words must differ")
        config = self.config
        if config_overrides:
            merged = self._config_dict() | config_overrides
            config = config_from_dict(merged)
        if seed is None:
            seed = uuid.uuid4().int % (2**32)
        session_id = session_id or f"s-{uuid.uuid4().hex[:12]}"
        if session_id in self.sessions:
            raise ValidationError(f"session id already exists: {session_id}")

        space = ConceptSpace(w1=w1, w2=w2, current_query=[w1, w2])
        session = Session(
            id=session_id,
            kind=kind,
            space=space,
            board=BoardState(axis_w1=w1, axis_w2=w2),
            config=config,
            rng_seed=int(seed),
            created_at=self._isotime(self.clock()),
        )

        results = self.source.search(
            [w1, w2], set(config.fields), 9, set(), self.store
        )
        session.board = board_ops.place_initial(
            session.board, [img.id for img in results], session.rng_seed
        )
        for img in results:
            session.images[img.id] = img
            session.seen_ids.add(img.id)

        self.sessions[session_id] = session
        self._close_iteration(session, top_words=[])
        return session

    def get(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is None:
            raise SessionNotFoundError(f"unknown session {session_id!r}")
        return session

    # -- actions -----------------------------------------------------

    def apply_action(self, session_id: str, action: dict) -> Session:
        session = self.get(session_id)
        kind = action.get("type")
        if kind not in ("move", "delete", "strike"):
            raise ValidationError(f"unknown action type {kind!r}")
        if kind not in session.capabilities():
            raise UnsupportedActionError(
                f"action {kind!r} is not available for {session.kind.value} sessions"
            )
        image_id = self._resolve_image(session, action)
        if kind == "move":
            to = parse_coord(action.get("to"))
            session.board = board_ops.move_image(session.board, image_id, to)
            entry = {"type": "move", "image": image_id, "to": [to.x, to.y]}
        elif kind == "delete":
            session.board = board_ops.delete_image(session.board, image_id)
            session.seen_ids.add(image_id)
            entry = {"type": "delete", "image": image_id}
        else:
            label = action.get("label")
            if not label or not isinstance(label, str):
                raise ValidationError("strike action needs a 'label'")
            self._strike(session, image_id, label)
            entry = {"type": "strike", "image": image_id, "label": label}
        entry["timestamp"] = self._isotime(self.clock())
        session.journal.append(entry)
        if self.storage:
            self.storage.append_journal(session.id, entry)
        return session

    def _strike(self, session: Session, image_id: str, label: str) -> None:
        image = session.images.get(image_id)
        if image is None:
            raise ImageNotFoundError(f"unknown image {image_id!r}")
        token = normalize_label(label)
        if token not in {normalize_label(ls.label) for ls in image.labels}:
            raise ValidationError(f"label {label!r} is not attached to image {image_id!r}")
        if token in (session.space.w1, session.space.w2):
            raise ValidationError("axis words cannot be struck")
        if resolve_label_vector(self.store, token) is None:
            raise ValidationError(f"label {label!r} resolves to no vector; cannot strike")
        session.space.negative_words.add(token)

    def _resolve_image(self, session: Session, action: dict) -> str:
        if "image" in action:
            image_id = action["image"]
            if session.board.coord_of(image_id) is None:
                raise ImageNotFoundError(f"image {image_id!r} is not on the board")
            return image_id
        if "cell" in action:
            coord = parse_coord(action["cell"])
            occupant = session.board.cells[coord]
            if occupant is None:
                raise ImageNotFoundError(f"cell ({coord.x}, {coord.y}) is empty")
            return occupant
        raise ValidationError("action needs an 'image' id or a 'cell' reference")

    # -- iterations --------------------------------------------------

    def next_iteration(self, session_id: str) -> tuple[Session, IterationRecord]:
        session = self.get(session_id)
        if "next" not in session.capabilities():
            raise UnsupportedActionError(
                f"{session.kind.value} sessions do not support iteration"
            )
        outcome = feedback.run_iteration(session, self.store, self.source, session.config)
        entry = {"type": "next", "timestamp": self._isotime(self.clock())}
        session.journal.append(entry)
        if self.storage:
            self.storage.append_journal(session.id, entry)
        record = self._close_iteration(session, top_words=[r.word for r in outcome.top_words])
        return session, record

    def _close_iteration(self, session: Session, top_words: list[str]) -> IterationRecord:
        """Snapshot the board, compute the closing board vector, persist."""
        store, config, space = self.store, session.config, session.space
        w1_vec = embedding.vector_of(store, space.w1)
        w2_vec = embedding.vector_of(store, space.w2)

        entries: list[RecordImage] = []
        for coord, image_id in session.board.occupied():
            img = session.images[image_id]
            try:
                wvec = feedback.image_weighted_vector(
                    img, coord, config.position_weights, space, store
                )
                cw1 = embedding.cos_sim(wvec, w1_vec)
                cw2 = embedding.cos_sim(wvec, w2_vec)
            except (AllLabelsOOV, VectorDomainError):
                cw1 = cw2 = None
            entries.append(
                RecordImage(
                    id=img.id, x=coord.x, y=coord.y, field=img.field, uri=img.uri,
                    source_rank=img.source_rank,
                    labels=[ls.label for ls in img.labels],
                    scores=[ls.score for ls in img.labels],
                    cos_w1=cw1, cos_w2=cw2,
                )
            )

        u_values: np.ndarray | None = None
        cos_w1_u = cos_w2_u = None
        try:
            board_vec = feedback.board_mean_with_negatives(
                session.board, session.images, config.position_weights,
                space, store, negatives=space.negative_words,
            )
            u_values = board_vec.values
            u_word = embedding.WordVector(word=None, values=u_values)
            cos_w1_u = embedding.cos_sim(u_word, w1_vec)
            cos_w2_u = embedding.cos_sim(u_word, w2_vec)
        except (EmptyBoardError, VectorDomainError):
            pass

        record = IterationRecord(
            session_id=session.id,
            iteration_id=session.iteration_count,
            kind=session.kind.value,
            w1=space.w1,
            w2=space.w2,
            query=list(space.current_query),
            images=entries,
            cos_w1_u=cos_w1_u,
            cos_w2_u=cos_w2_u,
            top_n_words=top_words,
            negative_words=sorted(space.negative_words),
            timestamp=self._isotime(self.clock()),
        )
        session.iteration_count += 1
        session.records.append(record)
        session.u_history.append(u_values)
        if self.storage:
            self.storage.append_record(record)
        return record

    # -- export and views ---------------------------------------------

    def export_board(self, session_id: str) -> dict:
        session = self.get(session_id)
        cells = []
        for coord in board_ops.ALL_COORDS:
            occupant = session.board.cells[coord]
            image = None
            if occupant is not None:
                img = session.images[occupant]
                image = {"id": img.id, "uri": img.uri}
            cells.append({"x": coord.x, "y": coord.y, "image": image})
        doc = {
            "session_id": session.id,
            "kind": session.kind.value,
            "axis": {"w1": session.space.w1, "w2": session.space.w2},
            "query": list(session.space.current_query),
            "negative_words": sorted(session.space.negative_words),
            "iteration_count": session.iteration_count,
            "cells": cells,
            "exported_at": self._isotime(self.clock()),
        }
        session.export_count += 1
        if self.storage:
            self.storage.write_export(session.id, session.export_count, doc)
        return doc

    def session_view(self, session: Session) -> dict:
        cells = []
        for coord in board_ops.ALL_COORDS:
            occupant = session.board.cells[coord]
            image = None
            if occupant is not None:
                img = session.images[occupant]
                image = {
                    "id": img.id,
                    "uri": img.uri,
                    "field": img.field,
                    "source_rank": img.source_rank,
                    "labels": [{"label": ls.label, "score": ls.score} for ls in img.labels],
                }
            cells.append({"x": coord.x, "y": coord.y, "image": image})
        return {
            "id": session.id,
            "kind": session.kind.value,
            "w1": session.space.w1,
            "w2": session.space.w2,
            "query": list(session.space.current_query),
            "negative_words": sorted(session.space.negative_words),
            "iteration_count": session.iteration_count,
            "seed": session.rng_seed,
            "created_at": session.created_at,
            "capabilities": {
                name: name in session.capabilities()
                for name in ("move", "delete", "strike", "next", "export")
            },
            "board": {"cells": cells},
        }

    def log_lines(self, session_id: str) -> Iterator[str]:
        session = self.get(session_id)
        if self.storage:
            return self.storage.record_lines(session_id)
        return iter(r.to_json() + "\n" for r in session.records)

    # -- helpers -------------------------------------------------------

    def _config_dict(self) -> dict:
        cfg = self.config
        return {
            "new_query_size": cfg.new_query_size,
            "top_n_words": cfg.top_n_words,
            "labels_per_image": cfg.labels_per_image,
            "fields": sorted(cfg.fields),
            "position_weights": [
                [list(cfg.position_weights.at(GridCoord(x, y))) for x in (1, 2, 3)]
                for y in (1, 2, 3)
            ],
        }

    def _isotime(self, now: float) -> str:
        # Timestamps must never run backwards within the engine.
        self._last_ts = max(now, self._last_ts)
        return datetime.fromtimestamp(self._last_ts, tz=timezone.utc).isoformat()
