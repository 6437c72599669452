"""The iteration algorithms: how a board becomes the next search query.

Four variants share the machinery here. The baseline never iterates;
the refill variant keeps the original two-word query; the steering
variant averages position-weighted image vectors into a board vector
and asks the embedding store for the most similar words; the strike
variant additionally subtracts vectors of rejected labels.

Per-label weighting: each label vector is scaled by its confidence and
by the cell's beta if the label leans toward the y-axis word, alpha if
it leans toward the x-axis word, then averaged over the labels actually
found in the vocabulary.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from . import embedding
from .board import BoardState, GridCoord, PositionWeights
from .embedding import EmbeddingStore, SimilarityResult, WordVector
from .errors import AllLabelsOOV, EmptyBoardError, UnsupportedActionError, VectorDomainError
from .imagery import ImageSource, LabeledImage, resolve_label_vector

logger = logging.getLogger(__name__)


class AlgorithmKind(enum.Enum):
    BASELINE = "baseline"
    REFERENCE1 = "reference1"
    PROPOSED = "proposed"
    REFERENCE2 = "reference2"

    @classmethod
    def parse(cls, value: str) -> "AlgorithmKind":
        try:
            return cls(value)
        except ValueError:
            raise ValueError(f"unknown algorithm kind {value!r}") from None


# Which user actions each variant accepts ("next" is the iterate button).
CAPABILITIES: dict[AlgorithmKind, frozenset[str]] = {
    AlgorithmKind.BASELINE: frozenset({"export"}),
    AlgorithmKind.REFERENCE1: frozenset({"delete", "next", "export"}),
    AlgorithmKind.PROPOSED: frozenset({"move", "delete", "next", "export"}),
    AlgorithmKind.REFERENCE2: frozenset({"move", "delete", "strike", "next", "export"}),
}


@dataclass
class ConceptSpace:
    """The fixed axis words plus the evolving search query."""

    w1: str
    w2: str
    current_query: list[str]
    negative_words: set[str] = field(default_factory=set)

    def __post_init__(self):
        if self.w1 == self.w2:
            raise ValueError("axis words must differ")


@dataclass(frozen=True)
class BoardVector:
    """Mean vector of the board's weighted image vectors (minus negatives)."""

    values: np.ndarray
    contributing_images: int
    contributing_negatives: int


W1_CLASS = "w1_class"
W2_CLASS = "w2_class"


def classify_label(label_vec: WordVector, w1_vec: WordVector, w2_vec: WordVector) -> str:
    """w1_class iff the label is strictly closer to w1; ties go to w2."""
    if embedding.cos_sim(label_vec, w1_vec) > embedding.cos_sim(label_vec, w2_vec):
        return W1_CLASS
    return W2_CLASS


def image_weighted_vector(
    image: LabeledImage,
    at: GridCoord,
    pw: PositionWeights,
    space: ConceptSpace,
    store: EmbeddingStore,
) -> WordVector:
    """Confidence- and position-weighted mean of an image's label vectors.

    Each in-vocabulary label contributes score * vector * (beta if the
    label classifies toward w1, else alpha); the sum is divided by the
    number of labels used. Raises AllLabelsOOV when nothing resolves.
    """
    alpha, beta = pw.at(at)
    w1_vec = embedding.vector_of(store, space.w1)
    w2_vec = embedding.vector_of(store, space.w2)
    total = np.zeros(store.dim, dtype=np.float64)
    used = 0
    for ls in image.labels:
        vec = resolve_label_vector(store, ls.label)
        if vec is None:
            continue
        weight = beta if classify_label(vec, w1_vec, w2_vec) == W1_CLASS else alpha
        total += ls.score * weight * vec.values
        used += 1
    if used == 0:
        raise AllLabelsOOV(image.id)
    return WordVector(word=None, values=total / used)


def board_mean_with_negatives(
    board: BoardState,
    images: dict[str, LabeledImage],
    pw: PositionWeights,
    space: ConceptSpace,
    store: EmbeddingStore,
    negatives: set[str] | frozenset[str] = frozenset(),
) -> BoardVector:
    """(sum of weighted image vectors - sum of negative-word vectors) / (m + n).

    m counts board images whose labels resolved; n counts the distinct
    negative words. Images with no resolvable labels stay on the board
    but contribute nothing (logged). With no negatives this is exactly
    the plain board mean.
    """
    total = np.zeros(store.dim, dtype=np.float64)
    m = 0
    for coord, image_id in board.occupied():
        image = images.get(image_id)
        if image is None:
            raise KeyError(f"board references unknown image {image_id!r}")
        try:
            total += image_weighted_vector(image, coord, pw, space, store).values
        except AllLabelsOOV:
            logger.warning("image %s contributes nothing to the board mean (labels OOV)", image_id)
            continue
        m += 1
    if m == 0:
        raise EmptyBoardError("no usable image on the board")
    n = 0
    for word in sorted(negatives):
        vec = resolve_label_vector(store, word)
        if vec is None:
            raise VectorDomainError(f"negative word {word!r} resolves to no vector")
        total -= vec.values
        n += 1
    return BoardVector(values=total / (m + n), contributing_images=m, contributing_negatives=n)


def board_mean(
    board: BoardState,
    images: dict[str, LabeledImage],
    pw: PositionWeights,
    space: ConceptSpace,
    store: EmbeddingStore,
) -> BoardVector:
    """Mean of the position-weighted image vectors over occupied cells."""
    return board_mean_with_negatives(board, images, pw, space, store, negatives=frozenset())


@dataclass(frozen=True)
class QueryUpdate:
    words: list[str]
    top_words: list[SimilarityResult]
    stalled: bool


def _acceptable_token(token: str) -> bool:
    # Letters and underscores only; digits and other punctuation make
    # poor query words (file ids, version tags, hyphenated fragments).
    return bool(token) and all(ch == "_" or ch.isalpha() for ch in token)


def query_exclusions(space: ConceptSpace, store: EmbeddingStore) -> set[str]:
    exclude = {space.w1, space.w2}
    exclude.update(space.current_query)
    for neg in space.negative_words:
        exclude.add(neg)
        exclude.add(neg.replace(" ", "_"))
    exclude.update(w for w in store.vocab if not _acceptable_token(w))
    return exclude


def new_query(
    space: ConceptSpace,
    board_vec: BoardVector,
    store: EmbeddingStore,
    top_n: int = 20,
    size: int = 2,
) -> QueryUpdate:
    """Derive the next search query from the board vector.

    Asks for the top_n most similar words, excluding the axis words,
    the current query, negative words, and junk tokens; the first
    `size` survivors become the new query and the full list is kept
    for the iteration log. No survivors means the query stalls and the
    previous one is kept.
    """
    results = embedding.most_similar(
        store,
        positives=[WordVector(word=None, values=board_vec.values)],
        negatives=[],
        n=top_n,
        exclude=query_exclusions(space, store),
    )
    if not results:
        logger.warning("query update stalled: every candidate word was excluded")
        return QueryUpdate(words=list(space.current_query), top_words=[], stalled=True)
    return QueryUpdate(words=[r.word for r in results[:size]], top_words=results, stalled=False)


@dataclass(frozen=True)
class IterationOutcome:
    """What one iteration did: the query it searched with, the candidate
    words behind it, and the images newly placed into empty cells."""

    query: list[str]
    top_words: list[SimilarityResult]
    placed: list[LabeledImage]
    stalled: bool


def run_iteration(session, store: EmbeddingStore, source: ImageSource, config) -> IterationOutcome:
    """Advance a session by one iteration according to its algorithm kind.

    The refill variant searches with the unchanged original query; the
    steering variants derive a fresh query from the board vector (with
    accumulated negative words subtracted for the strike variant).
    Empty cells are then filled in canonical grid order with the
    top-ranked images never shown before. Mutates the session's board,
    space, seen-set and image catalog.
    """
    kind = session.kind
    if kind is AlgorithmKind.BASELINE:
        raise UnsupportedActionError("baseline sessions are single-shot; no further iterations")

    if kind is AlgorithmKind.REFERENCE1:
        query = list(session.space.current_query)
        top_words: list[SimilarityResult] = []
        stalled = False
    else:
        negatives = session.space.negative_words if kind is AlgorithmKind.REFERENCE2 else frozenset()
        try:
            board_vec = board_mean_with_negatives(
                session.board, session.images, config.position_weights,
                session.space, store, negatives=negatives,
            )
        except EmptyBoardError:
            raise EmptyBoardError(
                "the board is empty; keep at least one image before iterating"
            ) from None
        update = new_query(
            session.space, board_vec, store,
            top_n=config.top_n_words, size=config.new_query_size,
        )
        if not update.stalled:
            session.space.current_query = list(update.words)
        query = list(session.space.current_query)
        top_words = update.top_words
        stalled = update.stalled

    empties = session.board.empty_cells()
    placed: list[LabeledImage] = []
    if empties:
        results = source.search(
            query, set(config.fields), len(empties), set(session.seen_ids), store
        )
        new_board = session.board.copy()
        for coord, img in zip(empties, results):
            new_board.cells[coord] = img.id
            session.images[img.id] = img
            session.seen_ids.add(img.id)
            placed.append(img)
        session.board = new_board
    return IterationOutcome(query=query, top_words=top_words, placed=placed, stalled=stalled)
