"""Convergence diagnostics over session logs.

Each iteration record carries the labels, confidence scores, and cell
coordinates of every board image, which is everything the board-vector
computation needs. The series of cosines between consecutive board
vectors shows how quickly a session settles: values near 1 mean the
board barely changed.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import embedding, feedback
from .board import BoardState, GridCoord, PositionWeights
from .embedding import EmbeddingStore
from .errors import RecordParseError, ValidationError
from .imagery import LabeledImage, LabelScore
from .session import IterationRecord


@dataclass(frozen=True)
class ConvergenceSeries:
    """cos(U_i, U_{i-1}) for consecutive iterations of one session."""

    session_id: str
    values: list[float]
    iteration_count: int


@dataclass(frozen=True)
class SessionStats:
    session_id: str
    iteration_count: int
    first_step_similarity: float
    mean: float
    min: float
    max: float


@dataclass(frozen=True)
class AggregateStats:
    """Descriptive statistics across sessions (population sigma)."""

    session_count: int
    mean_iteration_count: float
    std_iteration_count: float
    mean_first_step_similarity: float
    std_first_step_similarity: float
    mean_similarity: float
    std_similarity: float
    sessions: tuple[SessionStats, ...]


def read_log(path: str | Path) -> list[IterationRecord]:
    """Parse a JSON Lines log; a malformed line names its record index."""
    records: list[IterationRecord] = []
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
            except json.JSONDecodeError as exc:
                raise RecordParseError(i, f"invalid JSON: {exc}") from exc
            records.append(IterationRecord.from_dict(doc, index=i))
    return records


def group_by_session(records: list[IterationRecord]) -> dict[str, list[IterationRecord]]:
    grouped: dict[str, list[IterationRecord]] = {}
    for rec in records:
        grouped.setdefault(rec.session_id, []).append(rec)
    for recs in grouped.values():
        recs.sort(key=lambda r: r.iteration_id)
    return grouped


def board_from_record(rec: IterationRecord) -> tuple[BoardState, dict[str, LabeledImage]]:
    """Rebuild the board snapshot a record describes."""
    board = BoardState(axis_w1=rec.w1, axis_w2=rec.w2)
    images: dict[str, LabeledImage] = {}
    for entry in rec.images:
        coord = GridCoord(entry.x, entry.y)
        if board.cells[coord] is not None:
            raise RecordParseError(
                rec.iteration_id, f"two images share cell ({entry.x}, {entry.y})"
            )
        board.cells[coord] = entry.id
        images[entry.id] = LabeledImage(
            id=entry.id,
            uri=entry.uri,
            field=entry.field,
            labels=tuple(
                LabelScore(label=lab, score=score)
                for lab, score in zip(entry.labels, entry.scores)
            ),
            source_rank=entry.source_rank,
        )
    return board, images


def board_vector_of_record(
    rec: IterationRecord, store: EmbeddingStore, pw: PositionWeights
) -> np.ndarray:
    """Recompute the record's board vector through the live code path."""
    board, images = board_from_record(rec)
    space = feedback.ConceptSpace(
        w1=rec.w1, w2=rec.w2, current_query=list(rec.query) or [rec.w1, rec.w2],
        negative_words=set(rec.negative_words),
    )
    vec = feedback.board_mean_with_negatives(
        board, images, pw, space, store, negatives=set(rec.negative_words)
    )
    return vec.values


def convergence_series(
    records: list[IterationRecord],
    store: EmbeddingStore,
    pw: PositionWeights,
    space: feedback.ConceptSpace | None = None,
) -> ConvergenceSeries:
    """Consecutive board-vector cosines for one session's records.

    The axis words come from the records themselves; passing a space
    just asserts they match.
    """
    if len(records) < 2:
        raise ValidationError("convergence needs at least two iterations")
    session_ids = {r.session_id for r in records}
    if len(session_ids) != 1:
        raise ValidationError(f"records span multiple sessions: {sorted(session_ids)}")
    if space is not None and (space.w1, space.w2) != (records[0].w1, records[0].w2):
        raise ValidationError("axis words disagree with the log")
    ordered = sorted(records, key=lambda r: r.iteration_id)
    vectors = [board_vector_of_record(rec, store, pw) for rec in ordered]
    values = []
    for prev, curr in zip(vectors, vectors[1:]):
        values.append(
            embedding.cos_sim(
                embedding.WordVector(None, prev), embedding.WordVector(None, curr)
            )
        )
    return ConvergenceSeries(
        session_id=ordered[0].session_id, values=values, iteration_count=len(ordered)
    )


def session_stats(series: ConvergenceSeries) -> SessionStats:
    return SessionStats(
        session_id=series.session_id,
        iteration_count=series.iteration_count,
        first_step_similarity=series.values[0],
        mean=float(np.mean(series.values)),
        min=float(np.min(series.values)),
        max=float(np.max(series.values)),
    )


def summarize(series_list: list[ConvergenceSeries]) -> AggregateStats:
    if not series_list:
        raise ValidationError("nothing to summarize")
    stats = tuple(session_stats(s) for s in series_list)
    counts = [s.iteration_count for s in stats]
    firsts = [s.first_step_similarity for s in stats]
    all_values = [v for s in series_list for v in s.values]
    return AggregateStats(
        session_count=len(stats),
        mean_iteration_count=float(np.mean(counts)),
        std_iteration_count=float(np.std(counts)),
        mean_first_step_similarity=float(np.mean(firsts)),
        std_first_step_similarity=float(np.std(firsts)),
        mean_similarity=float(np.mean(all_values)),
        std_similarity=float(np.std(all_values)),
        sessions=stats,
    )


def write_csv(series_list: list[ConvergenceSeries], path: str | Path) -> None:
    """One row per consecutive-iteration cosine: session_id, iteration_i, cos_sim."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["session_id", "iteration_i", "cos_sim"])
        for series in series_list:
            for i, value in enumerate(series.values, start=1):
                writer.writerow([series.session_id, i, f"{value:.9f}"])


def analyze_log(
    path: str | Path, store: EmbeddingStore, pw: PositionWeights
) -> tuple[list[ConvergenceSeries], AggregateStats]:
    """Per-session series plus aggregate stats for a whole log file.

    Sessions with fewer than two iterations are skipped (no consecutive
    pair to compare).
    """
    grouped = group_by_session(read_log(path))
    series_list = [
        convergence_series(recs, store, pw)
        for recs in grouped.values()
        if len(recs) >= 2
    ]
    if not series_list:
        raise ValidationError("log holds no session with two or more iterations")
    return series_list, summarize(series_list)
