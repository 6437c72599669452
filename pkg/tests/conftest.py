"""Shared test fixtures: synthetic embedding stores and the demo corpus."""

import numpy as np
import pytest

from moodboard import embedding, fixtures, imagery
from moodboard.config import EngineConfig
from moodboard.session import SessionEngine, SessionStorage


@pytest.fixture(scope="session")
def demo_store():
    return fixtures.build_demo_store()


@pytest.fixture(scope="session")
def demo_corpus_dir(tmp_path_factory):
    target = tmp_path_factory.mktemp("corpus")
    fixtures.write_demo_corpus(target)
    return target


@pytest.fixture(scope="session")
def demo_manifest(demo_corpus_dir):
    return imagery.load_corpus(demo_corpus_dir / "manifest.json")


@pytest.fixture(scope="session")
def demo_source(demo_manifest):
    return imagery.FixtureCorpusSource(demo_manifest)


@pytest.fixture
def engine(demo_store, demo_source, tmp_path):
    return SessionEngine(
        store=demo_store,
        source=demo_source,
        config=EngineConfig(),
        storage=SessionStorage(tmp_path / "sessions"),
    )


def make_store(words_to_vectors):
    """Store from explicit word -> vector rows (renormalized on build)."""
    words = list(words_to_vectors)
    matrix = np.array([words_to_vectors[w] for w in words], dtype=np.float64)
    return embedding.from_arrays(words, matrix)


@pytest.fixture
def basis_store_2d():
    """Two ideal axis words plus a few blends, in the plane."""
    return make_store(
        {
            "w1": [1.0, 0.0],
            "w2": [0.0, 1.0],
            "both": [1.0, 1.0],
            "mostly1": [0.9, 0.1],
            "mostly2": [0.1, 0.9],
        }
    )
