"""Mood board composition engine with embedding-driven query feedback."""

from .board import BoardState, GridCoord, PositionWeights, default_position_weights
from .embedding import EmbeddingStore, SimilarityResult, WordVector
from .feedback import AlgorithmKind, BoardVector, ConceptSpace
from .imagery import CorpusManifest, LabelScore, LabeledImage
from .session import IterationRecord, Session, SessionEngine

__all__ = [
    "AlgorithmKind",
    "BoardState",
    "BoardVector",
    "ConceptSpace",
    "CorpusManifest",
    "EmbeddingStore",
    "GridCoord",
    "IterationRecord",
    "LabelScore",
    "LabeledImage",
    "PositionWeights",
    "Session",
    "SessionEngine",
    "SimilarityResult",
    "WordVector",
    "default_position_weights",
]

__version__ = "0.1.0"
