"""Deterministic demo fixtures: a small synthetic word-embedding
vocabulary and an image corpus labeled from it.

Vectors are built from a few orthonormal concept directions so that
cosine relationships are controlled: the two axis words anchor two
directions with a known similarity, each design field has its own
flavor direction, and every other word sits at a chosen blend. The
corpus generator draws per-image labels with a seed derived from the
image id, so any subset regenerates identically.
"""

from __future__ import annotations

import json
import zlib
from pathlib import Path

import numpy as np

from . import embedding
from .embedding import EmbeddingStore

DEMO_DIM = 16
DEMO_SEED = 20240811

AXIS_W1 = "ergonomic"
AXIS_W2 = "comfortable"

# word -> (pull toward axis 1, pull toward axis 2, field flavor, noise scale)
_WORDS: dict[str, tuple[float, float, str | None, float]] = {
    AXIS_W1: (1.0, 0.0, None, 0.0),
    AXIS_W2: (0.0, 1.0, None, 0.0),
    # industrial design
    "chair": (0.7, 0.4, "industrial_design", 0.15),
    "seat": (0.6, 0.5, "industrial_design", 0.15),
    "stool": (0.6, 0.2, "industrial_design", 0.15),
    "desk": (0.8, 0.1, "industrial_design", 0.15),
    "keyboard": (0.85, 0.05, "industrial_design", 0.15),
    "handle": (0.75, 0.1, "industrial_design", 0.15),
    "sofa": (0.2, 0.8, "industrial_design", 0.15),
    "couch": (0.15, 0.85, "industrial_design", 0.15),
    "lounge": (0.3, 0.75, "industrial_design", 0.15),
    "cushion": (0.1, 0.8, "industrial_design", 0.15),
    "recliner": (0.35, 0.7, "industrial_design", 0.15),
    "armchair": (0.4, 0.6, "industrial_design", 0.15),
    "furniture": (0.45, 0.45, "industrial_design", 0.15),
    "lamp": (0.3, 0.3, "industrial_design", 0.15),
    "plastic": (0.4, 0.1, "industrial_design", 0.15),
    "metal": (0.5, 0.05, "industrial_design", 0.15),
    "wood": (0.3, 0.35, "industrial_design", 0.15),
    "tool": (0.8, 0.15, "industrial_design", 0.15),
    "grip": (0.9, 0.1, "industrial_design", 0.15),
    "backrest": (0.65, 0.55, "industrial_design", 0.15),
    # architecture
    "building": (0.4, 0.2, "architecture", 0.15),
    "tower": (0.5, 0.05, "architecture", 0.15),
    "facade": (0.45, 0.15, "architecture", 0.15),
    "concrete": (0.35, 0.1, "architecture", 0.15),
    "atrium": (0.3, 0.4, "architecture", 0.15),
    "pavilion": (0.25, 0.45, "architecture", 0.15),
    "villa": (0.2, 0.5, "architecture", 0.15),
    "loft": (0.3, 0.5, "architecture", 0.15),
    "interior": (0.35, 0.55, "architecture", 0.15),
    "courtyard": (0.2, 0.4, "architecture", 0.15),
    "balcony": (0.25, 0.35, "architecture", 0.15),
    "staircase": (0.5, 0.2, "architecture", 0.15),
    "skylight": (0.3, 0.3, "architecture", 0.15),
    # fashion
    "dress": (0.1, 0.4, "fashion", 0.15),
    "fabric": (0.2, 0.5, "fashion", 0.15),
    "silk": (0.05, 0.6, "fashion", 0.15),
    "velvet": (0.05, 0.65, "fashion", 0.15),
    "denim": (0.3, 0.3, "fashion", 0.15),
    "jacket": (0.35, 0.35, "fashion", 0.15),
    "scarf": (0.1, 0.55, "fashion", 0.15),
    "linen": (0.15, 0.5, "fashion", 0.15),
    "knitwear": (0.2, 0.6, "fashion", 0.15),
    "tailored": (0.6, 0.3, "fashion", 0.15),
    "glove": (0.7, 0.25, "fashion", 0.15),
    "sneaker": (0.55, 0.3, "fashion", 0.15),
    # field-free descriptors
    "design": (0.5, 0.3, None, 0.2),
    "texture": (0.2, 0.45, None, 0.2),
    "form": (0.45, 0.2, None, 0.2),
    "curve": (0.4, 0.4, None, 0.2),
    "minimal": (0.5, 0.15, None, 0.2),
    "modern": (0.45, 0.25, None, 0.2),
    "classic": (0.2, 0.3, None, 0.2),
    "soft": (0.05, 0.75, None, 0.2),
    "firm": (0.7, 0.1, None, 0.2),
    "sturdy": (0.75, 0.15, None, 0.2),
    "plush": (0.05, 0.7, None, 0.2),
    "sleek": (0.6, 0.2, None, 0.2),
    "relaxed": (0.1, 0.65, None, 0.2),
    "supportive": (0.8, 0.3, None, 0.2),
    "padded": (0.25, 0.7, None, 0.2),
    "adjustable": (0.85, 0.2, None, 0.2),
    "breathable": (0.3, 0.55, None, 0.2),
    "snug": (0.15, 0.6, None, 0.2),
    # underscore phrases (legitimate query words)
    "interior_design": (0.4, 0.5, None, 0.15),
    "art_deco": (0.25, 0.2, None, 0.15),
    # junk tokens the query filter must skip
    "3d": (0.3, 0.3, None, 0.1),
    "mid-century": (0.45, 0.45, None, 0.1),
    "no9": (0.2, 0.2, None, 0.1),
    "vol.2": (0.1, 0.1, None, 0.1),
}

_FIELD_POOLS = {
    "industrial_design": [
        "chair", "seat", "stool", "desk", "keyboard", "handle", "sofa", "couch",
        "lounge", "cushion", "recliner", "armchair", "furniture", "lamp",
        "plastic", "metal", "wood", "tool", "grip", "backrest",
    ],
    "architecture": [
        "building", "tower", "facade", "concrete", "atrium", "pavilion", "villa",
        "loft", "interior", "courtyard", "balcony", "staircase", "skylight",
    ],
    "fashion": [
        "dress", "fabric", "silk", "velvet", "denim", "jacket", "scarf", "linen",
        "knitwear", "tailored", "glove", "sneaker",
    ],
}

_GENERIC_POOL = [
    "design", "texture", "form", "curve", "minimal", "modern", "classic", "soft",
    "firm", "sturdy", "plush", "sleek", "relaxed", "supportive", "padded",
    "adjustable", "breathable", "snug",
]


def _concept_basis() -> dict[str, np.ndarray]:
    rng = np.random.default_rng(DEMO_SEED)
    raw = rng.standard_normal((6, DEMO_DIM))
    ortho, _ = np.linalg.qr(raw.T)
    basis = ortho.T  # six orthonormal rows
    d1 = basis[0]
    # Axis words get a known, moderate similarity (~0.35).
    d2 = 0.35 * d1 + np.sqrt(1 - 0.35**2) * basis[1]
    return {
        "axis1": d1,
        "axis2": d2,
        "industrial_design": basis[2],
        "architecture": basis[3],
        "fashion": basis[4],
    }


def demo_vocabulary() -> tuple[list[str], np.ndarray]:
    basis = _concept_basis()
    words = list(_WORDS)
    matrix = np.zeros((len(words), DEMO_DIM))
    for i, word in enumerate(words):
        c1, c2, fld, noise_scale = _WORDS[word]
        vec = c1 * basis["axis1"] + c2 * basis["axis2"]
        if fld is not None:
            vec = vec + 0.5 * basis[fld]
        if noise_scale > 0:
            word_rng = np.random.default_rng(zlib.crc32(word.encode()) ^ DEMO_SEED)
            vec = vec + noise_scale * word_rng.standard_normal(DEMO_DIM)
        matrix[i] = vec / np.linalg.norm(vec)
    return words, matrix


def build_demo_store() -> EmbeddingStore:
    words, matrix = demo_vocabulary()
    return embedding.from_arrays(words, matrix)


def write_demo_embeddings(path: str | Path) -> Path:
    path = Path(path)
    words, matrix = demo_vocabulary()
    lines = [f"{len(words)} {DEMO_DIM}"]
    for word, row in zip(words, matrix):
        lines.append(word + " " + " ".join(f"{x:.8f}" for x in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def demo_corpus_entries(per_field: int = 14) -> list[dict]:
    """Manifest entries with deterministic per-image label draws."""
    entries: list[dict] = []
    for fld, pool in _FIELD_POOLS.items():
        prefix = {"industrial_design": "ind", "architecture": "arc", "fashion": "fas"}[fld]
        for i in range(per_field):
            image_id = f"{prefix}-{i:03d}"
            rng = np.random.default_rng(zlib.crc32(image_id.encode()) ^ DEMO_SEED)
            n_field = int(rng.integers(2, 5))
            n_generic = int(rng.integers(0, 3))
            picks = [pool[j] for j in rng.choice(len(pool), size=min(n_field, len(pool)), replace=False)]
            picks += [_GENERIC_POOL[j] for j in rng.choice(len(_GENERIC_POOL), size=n_generic, replace=False)]
            scores = np.sort(rng.uniform(0.55, 0.99, size=len(picks)))[::-1]
            entries.append(
                {
                    "id": image_id,
                    "file": f"images/{image_id}.png",
                    "field": fld,
                    "labels": [
                        {"label": lab, "score": round(float(s), 4)}
                        for lab, s in zip(picks, scores)
                    ],
                }
            )
    # Hand-shaped entries exercising the corner cases.
    entries.append(
        {
            "id": "ind-seven-labels",
            "file": "images/ind-seven-labels.png",
            "field": "industrial_design",
            "labels": [
                {"label": lab, "score": s}
                for lab, s in [
                    ("chair", 0.98), ("seat", 0.91), ("cushion", 0.84), ("wood", 0.77),
                    ("lamp", 0.70), ("metal", 0.63), ("plastic", 0.56),
                ]
            ],
        }
    )
    entries.append(
        {
            "id": "ind-tie-scores",
            "file": "images/ind-tie-scores.png",
            "field": "industrial_design",
            "labels": [
                {"label": "sofa", "score": 0.97},
                {"label": "cushion", "score": 0.83},
                {"label": "lounge", "score": 0.83},
            ],
        }
    )
    entries.append(
        {
            "id": "arc-phrase",
            "file": "images/arc-phrase.png",
            "field": "architecture",
            "labels": [
                {"label": "interior design", "score": 0.95},
                {"label": "soft concrete", "score": 0.80},
                {"label": "atrium", "score": 0.72},
            ],
        }
    )
    return entries


def convergence_corpus_entries(count: int = 30) -> list[dict]:
    """A corpus engineered for convergence studies.

    Every image carries the same dominant label and a secondary label
    whose confidence steps smoothly with the image index, so all image
    vectors lie on one line in embedding space. Replacing fewer images
    then perturbs the board vector strictly less, which makes scripted
    shrinking-replacement sessions converge monotonically.
    """
    entries = []
    for j in range(count):
        image_id = f"conv-{j:03d}"
        entries.append(
            {
                "id": image_id,
                "file": f"images/{image_id}.png",
                "field": "industrial_design",
                "labels": [
                    {"label": "sofa", "score": 0.9},
                    {"label": "cushion", "score": round(0.2 + 0.02 * j, 4)},
                ],
            }
        )
    return entries


def write_convergence_corpus(target_dir: str | Path, count: int = 30) -> Path:
    target = Path(target_dir)
    (target / "images").mkdir(parents=True, exist_ok=True)
    entries = convergence_corpus_entries(count=count)
    for entry in entries:
        _write_png(target / entry["file"], entry["id"])
    manifest = {"version": "convergence-1", "entries": entries}
    path = target / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2), encoding="utf-8")
    return path


def _write_png(path: Path, image_id: str) -> None:
    from PIL import Image

    h = zlib.crc32(image_id.encode())
    color = ((h >> 16) & 0xFF, (h >> 8) & 0xFF, h & 0xFF)
    img = Image.new("RGB", (64, 64), color)
    # A contrasting corner square keeps thumbnails distinguishable.
    for x in range(16):
        for y in range(16):
            img.putpixel((x, y), tuple(255 - c for c in color))
    img.save(path, format="PNG")


def write_demo_corpus(target_dir: str | Path, per_field: int = 14) -> Path:
    """Materialize the demo corpus (manifest + PNGs); returns manifest path."""
    target = Path(target_dir)
    (target / "images").mkdir(parents=True, exist_ok=True)
    entries = demo_corpus_entries(per_field=per_field)
    for entry in entries:
        _write_png(target / entry["file"], entry["id"])
    manifest = {"version": "demo-1", "entries": entries}
    path = target / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2), encoding="utf-8")
    return path
