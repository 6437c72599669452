"""Engine configuration with file overrides."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .board import PositionWeights, default_position_weights, position_weights_from_table
from .errors import ValidationError
from .imagery import FIELDS


@dataclass(frozen=True)
class EngineConfig:
    position_weights: PositionWeights = field(default_factory=default_position_weights)
    new_query_size: int = 2
    top_n_words: int = 20
    labels_per_image: int = 5
    fields: frozenset[str] = frozenset(FIELDS)

    def __post_init__(self):
        if self.new_query_size < 1:
            raise ValidationError("new_query_size must be >= 1")
        if self.top_n_words < 1:
            raise ValidationError("top_n_words must be >= 1")
        if self.labels_per_image < 1:
            raise ValidationError("labels_per_image must be >= 1")
        unknown = self.fields - set(FIELDS)
        if unknown or not self.fields:
            raise ValidationError(f"fields must be a non-empty subset of {FIELDS}, got {set(self.fields)}")


def config_from_dict(doc: dict) -> EngineConfig:
    kwargs = {}
    if "position_weights" in doc:
        kwargs["position_weights"] = position_weights_from_table(doc["position_weights"])
    for key in ("new_query_size", "top_n_words", "labels_per_image"):
        if key in doc:
            kwargs[key] = int(doc[key])
    if "fields" in doc:
        kwargs["fields"] = frozenset(doc["fields"])
    return EngineConfig(**kwargs)


def load_config(path: str | Path) -> EngineConfig:
    """Read a JSON config file overriding any subset of the defaults."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    return config_from_dict(doc)
