"""Image retrieval and labeling sources.

Two shapes of source exist behind the same contract: a deterministic
local fixture corpus for tests/demos, and thin adapters for external
search/labeling HTTP services (configured via environment, never used
by the test suite). Relevancy in the fixture corpus is embedding
cosine between an image's confidence-weighted label mean and the mean
of the query word vectors, so offline feedback loops stay meaningful.
"""

from __future__ import annotations

import json
import logging
import os
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Iterable, Protocol

from . import embedding
from .embedding import EmbeddingStore, WordVector
from .errors import CorpusError, ImageNotFoundError, QueryError, TransportError

logger = logging.getLogger(__name__)

FIELDS = ("industrial_design", "architecture", "fashion")


@dataclass(frozen=True)
class LabelScore:
    label: str
    score: float

    def __post_init__(self):
        if not self.label:
            raise CorpusError("empty label")
        if not (0.0 < self.score <= 1.0):
            raise CorpusError(f"label {self.label!r} score {self.score} outside (0, 1]")


@dataclass(frozen=True)
class LabeledImage:
    """An image with its ranked semantic labels (descending confidence)."""

    id: str
    uri: str
    field: str
    labels: tuple[LabelScore, ...]
    source_rank: int = 1

    def __post_init__(self):
        if self.field not in FIELDS:
            raise CorpusError(f"image {self.id!r}: unknown field {self.field!r}")
        if self.source_rank < 1:
            raise CorpusError(f"image {self.id!r}: source_rank must be >= 1")
        scores = [ls.score for ls in self.labels]
        if scores != sorted(scores, reverse=True):
            raise CorpusError(f"image {self.id!r}: labels not sorted by descending score")


@dataclass(frozen=True)
class CorpusManifest:
    version: str
    entries: tuple[LabeledImage, ...]
    root: Path

    def by_id(self) -> dict[str, LabeledImage]:
        return {img.id: img for img in self.entries}


def normalize_label(label: str) -> str:
    return " ".join(label.lower().split())


def resolve_label_vector(store: EmbeddingStore, label: str) -> WordVector | None:
    """Map a label (possibly a multiword phrase) to an embedding vector.

    Lowercase and collapse whitespace, then try: the token itself, the
    underscore-joined phrase, and finally the mean of the in-vocabulary
    constituent words. Returns None when nothing resolves; skipping a
    label beats corrupting a mean with a fake vector.
    """
    token = normalize_label(label)
    if not token:
        return None
    if " " not in token:
        if token in store:
            return embedding.vector_of(store, token)
        return None
    joined = token.replace(" ", "_")
    if joined in store:
        return embedding.vector_of(store, joined)
    parts = [embedding.vector_of(store, w) for w in token.split(" ") if w in store]
    if parts:
        return embedding.mean_vector([(v, 1.0) for v in parts])
    logger.warning("label %r resolves to no embedding vector; skipping", label)
    return None


def _sorted_labels(raw: Iterable[tuple[str, float]], keep: int) -> tuple[LabelScore, ...]:
    # Stable sort: equal scores keep their original (manifest/service) order.
    scored = [LabelScore(label=lab, score=float(s)) for lab, s in raw]
    scored.sort(key=lambda ls: -ls.score)
    return tuple(scored[:keep])


def load_corpus(path: str | Path, labels_per_image: int = 5) -> CorpusManifest:
    """Load and validate a manifest JSON; image files resolve relative to it."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CorpusError(f"cannot read manifest {path}: {exc}") from exc
    if "entries" not in doc:
        raise CorpusError("manifest has no 'entries' list")
    root = path.parent
    entries: list[LabeledImage] = []
    seen: set[str] = set()
    for i, raw in enumerate(doc["entries"]):
        image_id = raw.get("id")
        if not image_id:
            raise CorpusError(f"entry {i}: missing id")
        if image_id in seen:
            raise CorpusError(f"duplicate image id {image_id!r}")
        seen.add(image_id)
        file_rel = raw.get("file")
        if not file_rel:
            raise CorpusError(f"entry {image_id!r}: missing file")
        file_path = root / file_rel
        if not file_path.is_file():
            raise CorpusError(f"entry {image_id!r}: file not found: {file_path}")
        try:
            labels = _sorted_labels(
                ((lab["label"], lab["score"]) for lab in raw.get("labels", [])),
                keep=labels_per_image,
            )
            entries.append(
                LabeledImage(
                    id=image_id,
                    uri=str(file_path),
                    field=raw.get("field", ""),
                    labels=labels,
                    source_rank=i + 1,
                )
            )
        except CorpusError as exc:
            raise CorpusError(f"entry {image_id!r}: {exc}") from exc
    return CorpusManifest(version=str(doc.get("version", "0")), entries=tuple(entries), root=root)


class ImageSource(Protocol):
    def search(
        self,
        query: list[str],
        fields: set[str],
        limit: int,
        exclude_ids: set[str],
        store: EmbeddingStore,
    ) -> list[LabeledImage]: ...


class Labeler(Protocol):
    def labels_for(self, image_id: str) -> list[LabelScore]: ...


class FixtureCorpusSource:
    """Deterministic search/labeling over a local manifest corpus."""

    def __init__(self, manifest: CorpusManifest):
        self.manifest = manifest
        self._by_id = manifest.by_id()

    def search(
        self,
        query: list[str],
        fields: set[str],
        limit: int,
        exclude_ids: set[str],
        store: EmbeddingStore,
    ) -> list[LabeledImage]:
        if not query:
            raise QueryError("empty query")
        if limit < 1:
            raise QueryError("limit must be >= 1")
        query_vecs = [embedding.vector_of(store, w) for w in query if w in store]
        if not query_vecs:
            raise QueryError(f"no query word is in the vocabulary: {query}")
        query_mean = embedding.mean_vector([(v, 1.0) for v in query_vecs])

        scored: list[tuple[float, str, LabeledImage]] = []
        for img in self.manifest.entries:
            if img.id in exclude_ids or img.field not in fields:
                continue
            mean = self._label_mean(store, img)
            if mean is None:
                continue
            scored.append((embedding.cos_sim(mean, query_mean), img.id, img))
        scored.sort(key=lambda t: (-t[0], t[1]))
        return [
            replace(img, source_rank=rank)
            for rank, (_, _, img) in enumerate(scored[:limit], start=1)
        ]

    def labels_for(self, image_id: str) -> list[LabelScore]:
        img = self._by_id.get(image_id)
        if img is None:
            raise ImageNotFoundError(f"unknown image id {image_id!r}")
        return list(img.labels)

    def image_bytes(self, image_id: str) -> bytes:
        img = self._by_id.get(image_id)
        if img is None:
            raise ImageNotFoundError(f"unknown image id {image_id!r}")
        return Path(img.uri).read_bytes()

    @staticmethod
    def _label_mean(store: EmbeddingStore, img: LabeledImage) -> WordVector | None:
        pairs = []
        for ls in img.labels:
            vec = resolve_label_vector(store, ls.label)
            if vec is not None:
                pairs.append((vec, ls.score))
        if not pairs:
            logger.warning("image %s has no resolvable labels; unrankable", img.id)
            return None
        mean = embedding.mean_vector(pairs)
        if float((mean.values**2).sum()) < 1e-24:
            return None
        return mean


def search_images(
    source: ImageSource,
    query: list[str],
    fields: set[str],
    limit: int,
    exclude_ids: set[str],
    store: EmbeddingStore,
) -> list[LabeledImage]:
    """Ranked image search through any source (fixture or external adapter)."""
    return source.search(query, fields, limit, exclude_ids, store)


def label_image(labeler: Labeler, image_id: str) -> list[LabelScore]:
    """Top labels for an image, descending confidence, at most five."""
    return labeler.labels_for(image_id)


@dataclass(frozen=True)
class AdapterConfig:
    """External service knobs, read from the environment."""

    behance_key: str | None = None
    vision_key: str | None = None
    timeout_ms: int = 10_000
    retries: int = 2

    @classmethod
    def from_env(cls) -> "AdapterConfig":
        return cls(
            behance_key=os.environ.get("MBC_BEHANCE_KEY"),
            vision_key=os.environ.get("MBC_VISION_KEY"),
            timeout_ms=int(os.environ.get("MBC_HTTP_TIMEOUT_MS", "10000")),
        )


class HttpImageSearchAdapter:
    """Behance-style search client; maps the service's ranked response
    onto LabeledImage values. Not exercised by the acceptance suite.

    query_joiner controls how a multi-word query is sent (services take
    one string; the engine treats queries as a bag of words).
    """

    def __init__(
        self,
        base_url: str,
        config: AdapterConfig | None = None,
        http_get: Callable[..., object] | None = None,
        query_joiner: str = " ",
    ):
        self.base_url = base_url.rstrip("/")
        self.config = config or AdapterConfig.from_env()
        self._http_get = http_get or _default_http_get
        self.query_joiner = query_joiner

    def search(
        self,
        query: list[str],
        fields: set[str],
        limit: int,
        exclude_ids: set[str],
        store: EmbeddingStore,
    ) -> list[LabeledImage]:
        if not query:
            raise QueryError("empty query")
        payload = self._request(
            f"{self.base_url}/search",
            params={
                "q": self.query_joiner.join(query),
                "fields": ",".join(sorted(fields)),
                "limit": limit,
            },
        )
        results = parse_search_response(payload)
        return [img for img in results if img.id not in exclude_ids][:limit]

    def _request(self, url: str, params: dict) -> dict:
        last: Exception | None = None
        for attempt in range(self.config.retries + 1):
            try:
                return self._http_get(
                    url,
                    params=params,
                    timeout=self.config.timeout_ms / 1000.0,
                    api_key=self.config.behance_key,
                )
            except TransportError as exc:
                last = exc
                if attempt < self.config.retries:
                    time.sleep(0.1 * (attempt + 1))
        raise TransportError(f"search service unreachable after retries: {last}")


class HttpLabelAdapter:
    """Vision-style labeling client; truncates and sorts the service
    response exactly like the fixture labeler."""

    def __init__(
        self,
        base_url: str,
        config: AdapterConfig | None = None,
        http_get: Callable[..., object] | None = None,
        labels_per_image: int = 5,
    ):
        self.base_url = base_url.rstrip("/")
        self.config = config or AdapterConfig.from_env()
        self._http_get = http_get or _default_http_get
        self.labels_per_image = labels_per_image

    def labels_for(self, image_id: str) -> list[LabelScore]:
        try:
            payload = self._http_get(
                f"{self.base_url}/labels/{image_id}",
                params={},
                timeout=self.config.timeout_ms / 1000.0,
                api_key=self.config.vision_key,
            )
        except TransportError:
            raise
        return list(parse_label_response(payload, keep=self.labels_per_image))


def parse_search_response(payload: dict) -> list[LabeledImage]:
    """Map a ranked service response to LabeledImage values (rank = position)."""
    out = []
    for rank, item in enumerate(payload.get("results", []), start=1):
        out.append(
            LabeledImage(
                id=str(item["id"]),
                uri=str(item.get("uri", "")),
                field=item.get("field", "industrial_design"),
                labels=_sorted_labels(
                    ((lab["label"], lab["score"]) for lab in item.get("labels", [])), keep=5
                ),
                source_rank=rank,
            )
        )
    return out


def parse_label_response(payload: dict, keep: int = 5) -> tuple[LabelScore, ...]:
    if "error" in payload:
        if payload["error"] == "not_found":
            raise ImageNotFoundError(payload.get("detail", "image not found"))
        raise TransportError(payload.get("detail", "labeling service error"))
    return _sorted_labels(
        ((lab["label"], lab["score"]) for lab in payload.get("labels", [])), keep=keep
    )


def _default_http_get(url: str, params: dict, timeout: float, api_key: str | None) -> dict:
    import httpx

    headers = {"Authorization": f"Bearer {api_key}"} if api_key else {}
    try:
        resp = httpx.get(url, params=params, headers=headers, timeout=timeout)
    except httpx.HTTPError as exc:
        raise TransportError(str(exc)) from exc
    if resp.status_code == 404:
        raise ImageNotFoundError(f"{url}: not found")
    if resp.status_code >= 400:
        raise TransportError(f"{url}: HTTP {resp.status_code}")
    return resp.json()
