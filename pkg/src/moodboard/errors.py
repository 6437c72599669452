"""Exception types shared across the package.

The HTTP layer maps these onto status codes (validation -> 400,
not-found -> 404, unsupported action -> 409), so raising the right
class matters more than the message text.
"""


class MoodboardError(Exception):
    """Base class for all errors raised by this package."""


class EmbeddingLoadError(MoodboardError):
    """Embedding file is malformed; message names the offending line."""


class OOVWordError(MoodboardError):
    """A word is not in the embedding vocabulary."""

    def __init__(self, word: str):
        super().__init__(f"word not in vocabulary: {word!r}")
        self.word = word


class VectorDomainError(MoodboardError):
    """Vector arithmetic is undefined for the given inputs (zero norm, empty mean)."""


class CorpusError(MoodboardError):
    """Corpus manifest failed validation; message names the entry."""


class ImageNotFoundError(MoodboardError):
    """Referenced image id is unknown (not in corpus or not on the board)."""


class SessionNotFoundError(MoodboardError):
    """Referenced session id is unknown."""


class ScriptError(MoodboardError):
    """A scripted session step failed; carries the zero-based step index."""

    def __init__(self, step_index: int, cause: Exception):
        super().__init__(f"step {step_index}: {cause}")
        self.step_index = step_index
        self.cause = cause


class TransportError(MoodboardError):
    """External image/label service could not be reached (distinct from not-found)."""


class QueryError(MoodboardError):
    """Search query unusable, e.g. every query word is out of vocabulary."""


class AllLabelsOOV(MoodboardError):
    """None of an image's labels resolve to a vector; caller skips the image."""

    def __init__(self, image_id: str):
        super().__init__(f"no label of image {image_id!r} resolves to a vector")
        self.image_id = image_id


class EmptyBoardError(MoodboardError):
    """Board has no usable images; the operation needs at least one."""


class UnsupportedActionError(MoodboardError):
    """Action is not available for this algorithm variant."""


class ValidationError(MoodboardError):
    """Request or configuration value violates a contract."""


class RecordParseError(MoodboardError):
    """An iteration record is missing fields or malformed."""

    def __init__(self, index: int, reason: str):
        super().__init__(f"record {index}: {reason}")
        self.index = index
