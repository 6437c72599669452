"""Word-embedding store: vocabulary, cosine similarity, weighted means,
and top-N most-similar-word queries.

The store keeps one unit-normalized row per word, so a single
matrix-vector product against a normalized query yields every cosine
at once. All functions here are pure and policy-free; callers decide
what to exclude from rankings.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import EmbeddingLoadError, OOVWordError, VectorDomainError

logger = logging.getLogger(__name__)

_ZERO_NORM_EPS = 1e-12


@dataclass(frozen=True)
class EmbeddingStore:
    """Vocabulary plus an (N, M) matrix of unit-normalized word vectors."""

    vocab: tuple[str, ...]
    matrix: np.ndarray
    word_index: dict[str, int] = field(repr=False)

    def __post_init__(self):
        if self.matrix.ndim != 2:
            raise ValueError("matrix must be 2-D")
        n, m = self.matrix.shape
        if n < 1 or m < 1:
            raise ValueError("store needs at least one word and one dimension")
        if len(self.vocab) != n or len(self.word_index) != n:
            raise ValueError("vocab, matrix and index sizes disagree")

    def __contains__(self, word: str) -> bool:
        return word in self.word_index

    def __len__(self) -> int:
        return len(self.vocab)

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True)
class WordVector:
    """An M-dimensional vector, optionally tied to a word.

    Synthetic vectors (means, board vectors) carry word=None.
    """

    word: str | None
    values: np.ndarray


@dataclass(frozen=True)
class SimilarityResult:
    word: str
    score: float


def from_arrays(vocab: list[str], matrix: np.ndarray) -> EmbeddingStore:
    """Build a store from pre-assembled rows, renormalizing each to unit length."""
    matrix = np.asarray(matrix, dtype=np.float64)
    norms = np.linalg.norm(matrix, axis=1)
    if np.any(norms < _ZERO_NORM_EPS):
        bad = int(np.argmin(norms))
        raise EmbeddingLoadError(f"zero vector for word {vocab[bad]!r} (row {bad})")
    matrix = matrix / norms[:, None]
    matrix.flags.writeable = False
    index = {w: i for i, w in enumerate(vocab)}
    if len(index) != len(vocab):
        seen: set[str] = set()
        for w in vocab:
            if w in seen:
                raise EmbeddingLoadError(f"duplicate word {w!r}")
            seen.add(w)
    return EmbeddingStore(vocab=tuple(vocab), matrix=matrix, word_index=index)


def load_store(path: str, limit: int | None = None) -> EmbeddingStore:
    """Load a text embedding file: header line "N M", then "word c1 ... cM" lines.

    Every vector is renormalized to unit length; load order becomes row
    order. Raises EmbeddingLoadError naming the offending line on any
    malformed row, duplicate word, or zero vector.
    """
    words: list[str] = []
    rows: list[np.ndarray] = []
    index: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) != 2:
            raise EmbeddingLoadError(f"malformed header line: {header.strip()!r}")
        try:
            n_declared, m = int(parts[0]), int(parts[1])
        except ValueError:
            raise EmbeddingLoadError(f"malformed header line: {header.strip()!r}") from None
        if n_declared < 1 or m < 1:
            raise EmbeddingLoadError(f"header must declare N >= 1 and M >= 1, got {header.strip()!r}")

        n_wanted = n_declared if limit is None else min(n_declared, limit)
        for lineno, line in enumerate(fh, start=2):
            if len(words) >= n_wanted:
                break
            line = line.rstrip("\n")
            if not line:
                raise EmbeddingLoadError(f"line {lineno}: empty line")
            fields = line.split(" ")
            if len(fields) != m + 1:
                raise EmbeddingLoadError(
                    f"line {lineno}: expected {m} components, found {len(fields) - 1}"
                )
            word = fields[0]
            if word in index:
                raise EmbeddingLoadError(f"line {lineno}: duplicate word {word!r}")
            try:
                vec = np.array(fields[1:], dtype=np.float64)
            except ValueError:
                raise EmbeddingLoadError(f"line {lineno}: non-numeric component") from None
            norm = float(np.linalg.norm(vec))
            if norm < _ZERO_NORM_EPS:
                raise EmbeddingLoadError(f"line {lineno}: zero vector for word {word!r}")
            index[word] = len(words)
            words.append(word)
            rows.append(vec / norm)

    if len(words) < n_wanted:
        raise EmbeddingLoadError(
            f"file ended after {len(words)} words, header declared {n_declared}"
        )
    matrix = np.vstack(rows)
    matrix.flags.writeable = False
    logger.info("loaded %d words of dimension %d from %s", len(words), m, path)
    return EmbeddingStore(vocab=tuple(words), matrix=matrix, word_index=index)


def vector_of(store: EmbeddingStore, word: str) -> WordVector:
    """Stored unit vector for a word; raises OOVWordError if absent."""
    idx = store.word_index.get(word)
    if idx is None:
        raise OOVWordError(word)
    return WordVector(word=word, values=store.matrix[idx])


def cos_sim(a: WordVector, b: WordVector) -> float:
    """Cosine similarity a.b / (|a||b|); zero-norm inputs are a domain error."""
    va, vb = a.values, b.values
    if va.shape != vb.shape:
        raise VectorDomainError(f"dimension mismatch: {va.shape} vs {vb.shape}")
    na = float(np.linalg.norm(va))
    nb = float(np.linalg.norm(vb))
    if na < _ZERO_NORM_EPS or nb < _ZERO_NORM_EPS:
        raise VectorDomainError("cosine similarity undefined for zero-norm vector")
    return float(np.dot(va, vb) / (na * nb))


def mean_vector(weighted: list[tuple[WordVector, float]]) -> WordVector:
    """Weighted mean (sum of weight_j * v_j) / count.

    The divisor is the number of entries, not the weight sum, and the
    result is deliberately not renormalized.
    """
    if not weighted:
        raise VectorDomainError("mean of empty vector list")
    dim = weighted[0][0].values.shape
    total = np.zeros(dim, dtype=np.float64)
    for vec, weight in weighted:
        if vec.values.shape != dim:
            raise VectorDomainError("mean over mixed dimensionalities")
        total += weight * vec.values
    return WordVector(word=None, values=total / len(weighted))


def combine_query(positives: list[WordVector], negatives: list[WordVector]) -> WordVector:
    """(sum positives - sum negatives) / (len positives + len negatives)."""
    if not positives and not negatives:
        raise VectorDomainError("need at least one positive or negative vector")
    first = positives[0] if positives else negatives[0]
    total = np.zeros_like(first.values, dtype=np.float64)
    for vec in positives:
        total += vec.values
    for vec in negatives:
        total -= vec.values
    return WordVector(word=None, values=total / (len(positives) + len(negatives)))


def most_similar(
    store: EmbeddingStore,
    positives: list[WordVector],
    negatives: list[WordVector] | None = None,
    n: int = 10,
    exclude: set[str] | frozenset[str] = frozenset(),
) -> list[SimilarityResult]:
    """Top-n vocabulary words by cosine to the positive/negative mean.

    The mean is scaled to unit length and scored against the whole
    store with one matrix-vector product. Ranking is score-descending
    with ties broken by ascending row index; excluded words never
    appear. If fewer than n words remain, all of them are returned.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    negatives = negatives or []
    query = combine_query(positives, negatives)
    norm = float(np.linalg.norm(query.values))
    if norm < _ZERO_NORM_EPS:
        raise VectorDomainError("combined query vector has zero norm")
    scores = store.matrix @ (query.values / norm)
    # Stable sort on negated scores: equal scores keep ascending row order.
    order = np.argsort(-scores, kind="stable")
    out: list[SimilarityResult] = []
    for idx in order:
        word = store.vocab[idx]
        if word in exclude:
            continue
        out.append(SimilarityResult(word=word, score=float(scores[idx])))
        if len(out) == n:
            break
    return out
