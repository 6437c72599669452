"""Convergence series recomputation from logs and summary statistics."""

import csv
import json
import math

import numpy as np
import pytest

from moodboard import analysis, fixtures, imagery
from moodboard.config import EngineConfig
from moodboard.embedding import WordVector, cos_sim
from moodboard.errors import RecordParseError, ValidationError
from moodboard.script import run_script, validate_script
from moodboard.session import IterationRecord, RecordImage, SessionEngine, SessionStorage

from conftest import make_store

PW = EngineConfig().position_weights


@pytest.fixture(scope="module")
def convergence_source(tmp_path_factory):
    target = tmp_path_factory.mktemp("conv")
    fixtures.write_convergence_corpus(target)
    return imagery.FixtureCorpusSource(imagery.load_corpus(target / "manifest.json"))


def shrinking_replacement_steps():
    """Delete 9, then 4, then 2, then 1 images, iterating after each wave."""
    all_cells = [[x, y] for y in (3, 2, 1) for x in (1, 2, 3)]
    steps = [{"action": "delete", "cell": c} for c in all_cells]
    steps += [{"action": "next"}]
    steps += [{"action": "delete", "cell": c} for c in ([3, 1], [1, 2], [2, 1], [1, 1])]
    steps += [{"action": "next"}]
    steps += [{"action": "delete", "cell": c} for c in ([2, 1], [1, 1])]
    steps += [{"action": "next"}]
    steps += [{"action": "delete", "cell": [1, 1]}, {"action": "next"}]
    return steps


def run_convergent_session(demo_store, convergence_source, tmp_path, seed=17):
    script = validate_script(
        {
            "kind": "reference1", "w1": "ergonomic", "w2": "comfortable",
            "seed": seed, "steps": shrinking_replacement_steps(),
        }
    )
    engine = SessionEngine(
        store=demo_store, source=convergence_source,
        storage=SessionStorage(tmp_path / "sessions"),
    )
    return run_script(script, engine), tmp_path / "sessions"


def synthetic_record(session_id, iteration_id, placements, w1="w1", w2="w2"):
    images = [
        RecordImage(
            id=f"{session_id}-{iteration_id}-{i}", x=x, y=y,
            field="industrial_design", uri="", source_rank=i + 1,
            labels=[lab for lab, _ in labels], scores=[s for _, s in labels],
            cos_w1=None, cos_w2=None,
        )
        for i, ((x, y), labels) in enumerate(placements)
    ]
    return IterationRecord(
        session_id=session_id, iteration_id=iteration_id, kind="reference1",
        w1=w1, w2=w2, query=[w1, w2], images=images,
        cos_w1_u=None, cos_w2_u=None, top_n_words=[], negative_words=[],
        timestamp="2026-01-01T00:00:00+00:00",
    )


class TestConvergenceSeries:
    def test_identical_consecutive_boards_give_one(self, engine):
        session = engine.create_session("reference1", "ergonomic", "comfortable", seed=6)
        engine.next_iteration(session.id)  # full board: nothing refilled
        series = analysis.convergence_series(session.records, engine.store, PW)
        assert len(series.values) == 1
        assert series.values[0] == pytest.approx(1.0, abs=1e-6)

    def test_orthogonal_replacement_gives_zero(self):
        store = make_store(
            {
                "axis_a": [1, 0, 0, 0],
                "axis_b": [0, 1, 0, 0],
                "w1": [0, 0, 1, 0],
                "w2": [0, 0, 0, 1],
            }
        )
        cells = [(x, y) for y in (3, 2, 1) for x in (1, 2, 3)]
        rec0 = synthetic_record("ortho", 0, [(c, [("axis_a", 1.0)]) for c in cells])
        rec1 = synthetic_record("ortho", 1, [(c, [("axis_b", 1.0)]) for c in cells])
        series = analysis.convergence_series([rec0, rec1], store, PW)
        assert series.values[0] == pytest.approx(0.0, abs=1e-9)

    def test_shrinking_replacements_increase_series(
        self, demo_store, convergence_source, tmp_path
    ):
        result, _ = run_convergent_session(demo_store, convergence_source, tmp_path)
        series = analysis.convergence_series(result.records, demo_store, PW)
        assert series.iteration_count == 5
        assert len(series.values) == 4
        assert all(b > a for a, b in zip(series.values, series.values[1:]))

    def test_log_recomputation_matches_online_vectors(
        self, demo_store, convergence_source, tmp_path
    ):
        result, sessions_dir = run_convergent_session(demo_store, convergence_source, tmp_path)
        log_path = sessions_dir / result.session.id / "records.jsonl"
        records = analysis.read_log(log_path)
        series = analysis.convergence_series(records, demo_store, PW)
        online = [
            cos_sim(WordVector(None, prev), WordVector(None, curr))
            for prev, curr in zip(result.session.u_history, result.session.u_history[1:])
        ]
        assert len(series.values) == len(online)
        for recomputed, live in zip(series.values, online):
            assert abs(recomputed - live) < 1e-9

    def test_values_bounded(self, demo_store, convergence_source, tmp_path):
        result, _ = run_convergent_session(demo_store, convergence_source, tmp_path)
        series = analysis.convergence_series(result.records, demo_store, PW)
        assert all(-1 - 1e-12 <= v <= 1 + 1e-12 for v in series.values)

    def test_needs_two_records(self, engine):
        session = engine.create_session("reference1", "ergonomic", "comfortable", seed=6)
        with pytest.raises(ValidationError):
            analysis.convergence_series(session.records, engine.store, PW)

    def test_rejects_mixed_sessions(self, engine):
        a = engine.create_session("reference1", "ergonomic", "comfortable", seed=6)
        b = engine.create_session("reference1", "sofa", "chair", seed=6)
        engine.next_iteration(a.id)
        with pytest.raises(ValidationError):
            analysis.convergence_series(a.records + b.records, engine.store, PW)


class TestReadLog:
    def test_round_trip(self, engine, tmp_path):
        session = engine.create_session("reference1", "ergonomic", "comfortable", seed=8)
        engine.next_iteration(session.id)
        log_path = tmp_path / "sessions" / session.id / "records.jsonl"
        records = analysis.read_log(log_path)
        assert [r.iteration_id for r in records] == [0, 1]
        assert records[0].to_dict() == session.records[0].to_dict()

    def test_bad_json_names_record_index(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        valid = synthetic_record("s", 0, [((2, 2), [("x", 0.9)])]).to_json()
        path.write_text(valid + "\nnot json\n")
        with pytest.raises(RecordParseError, match="record 1"):
            analysis.read_log(path)

    def test_missing_field_names_record_index(self, tmp_path):
        path = tmp_path / "incomplete.jsonl"
        path.write_text(json.dumps({"session_id": "s", "iteration_id": 0}) + "\n")
        with pytest.raises(RecordParseError, match="record 0"):
            analysis.read_log(path)

    def test_duplicate_cell_rejected(self):
        store = make_store({"w1": [1, 0], "w2": [0, 1], "x": [1, 1]})
        rec = synthetic_record(
            "dup", 0, [((2, 2), [("x", 0.9)]), ((2, 2), [("x", 0.8)])]
        )
        with pytest.raises(RecordParseError, match="share cell"):
            analysis.board_from_record(rec)


class TestSummarize:
    def test_single_series_mean(self):
        series = analysis.ConvergenceSeries("s1", [0.9, 0.95], iteration_count=3)
        stats = analysis.session_stats(series)
        assert stats.mean == pytest.approx(0.925)
        assert stats.first_step_similarity == pytest.approx(0.9)
        assert stats.min == pytest.approx(0.9)
        assert stats.max == pytest.approx(0.95)

    def test_mean_iteration_count(self):
        a = analysis.ConvergenceSeries("s1", [0.9, 0.8, 0.7], iteration_count=4)
        b = analysis.ConvergenceSeries("s2", [0.9] * 5, iteration_count=6)
        agg = analysis.summarize([a, b])
        assert agg.mean_iteration_count == pytest.approx(5.0)
        assert agg.session_count == 2

    def test_against_spreadsheet_style_oracle(self):
        rng = np.random.default_rng(77)
        series_list = []
        for i in range(10):
            n = int(rng.integers(2, 8))
            values = [float(v) for v in rng.uniform(-0.2, 1.0, size=n)]
            series_list.append(
                analysis.ConvergenceSeries(f"s{i}", values, iteration_count=n + 1)
            )
        agg = analysis.summarize(series_list)

        counts = [s.iteration_count for s in series_list]
        mean_count = sum(counts) / len(counts)
        std_count = math.sqrt(sum((c - mean_count) ** 2 for c in counts) / len(counts))
        firsts = [s.values[0] for s in series_list]
        mean_first = sum(firsts) / len(firsts)
        everything = [v for s in series_list for v in s.values]
        mean_all = sum(everything) / len(everything)
        std_all = math.sqrt(sum((v - mean_all) ** 2 for v in everything) / len(everything))

        assert agg.mean_iteration_count == pytest.approx(mean_count, abs=1e-12)
        assert agg.std_iteration_count == pytest.approx(std_count, abs=1e-12)
        assert agg.mean_first_step_similarity == pytest.approx(mean_first, abs=1e-12)
        assert agg.mean_similarity == pytest.approx(mean_all, abs=1e-12)
        assert agg.std_similarity == pytest.approx(std_all, abs=1e-12)

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            analysis.summarize([])


class TestCsvAndLogAnalysis:
    def test_write_csv(self, tmp_path):
        series = analysis.ConvergenceSeries("s1", [0.5, 0.75], iteration_count=3)
        out = tmp_path / "series.csv"
        analysis.write_csv([series], out)
        with open(out) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["session_id", "iteration_i", "cos_sim"]
        assert rows[1][:2] == ["s1", "1"]
        assert float(rows[1][2]) == pytest.approx(0.5)
        assert float(rows[2][2]) == pytest.approx(0.75)

    def test_analyze_log_end_to_end(self, demo_store, convergence_source, tmp_path):
        result, sessions_dir = run_convergent_session(demo_store, convergence_source, tmp_path)
        log_path = sessions_dir / result.session.id / "records.jsonl"
        series_list, agg = analysis.analyze_log(log_path, demo_store, PW)
        assert len(series_list) == 1
        assert agg.session_count == 1
        assert agg.mean_iteration_count == 5
