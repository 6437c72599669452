"""Command line surface: run, analyze, embeddings info, fixture."""

import json

import pytest

from moodboard import fixtures
from moodboard.cli import main


@pytest.fixture(scope="module")
def cli_fixture_dir(tmp_path_factory):
    target = tmp_path_factory.mktemp("cli")
    fixtures.write_demo_corpus(target / "corpus")
    fixtures.write_demo_embeddings(target / "embeddings.txt")
    return target


def test_embeddings_info(cli_fixture_dir, capsys):
    rc = main(["embeddings", "info", str(cli_fixture_dir / "embeddings.txt")])
    out = capsys.readouterr().out
    assert rc == 0
    assert "words: 71" in out
    assert "dimensions: 16" in out


def test_embeddings_info_bad_file(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("not a header\n")
    rc = main(["embeddings", "info", str(bad)])
    assert rc == 1
    assert "error" in capsys.readouterr().err


def test_run_script_and_analyze(cli_fixture_dir, tmp_path, capsys):
    script_path = tmp_path / "script.json"
    script_path.write_text(
        json.dumps(
            {
                "kind": "reference1",
                "w1": "ergonomic",
                "w2": "comfortable",
                "seed": 5,
                "corpus": str(cli_fixture_dir / "corpus" / "manifest.json"),
                "embeddings": str(cli_fixture_dir / "embeddings.txt"),
                "steps": [
                    {"action": "delete", "cell": [1, 1]},
                    {"action": "next"},
                    {"action": "delete", "cell": [2, 2]},
                    {"action": "next"},
                    {"action": "export"},
                ],
            }
        )
    )
    out_dir = tmp_path / "out"
    rc = main(["run", "--script", str(script_path), "--out", str(out_dir)])
    out = capsys.readouterr().out
    assert rc == 0
    assert "3 iteration(s)" in out
    assert "1 export(s)" in out

    log_files = list(out_dir.glob("*/records.jsonl"))
    assert len(log_files) == 1

    csv_path = tmp_path / "series.csv"
    rc = main(
        [
            "analyze",
            "--log", str(log_files[0]),
            "--embeddings", str(cli_fixture_dir / "embeddings.txt"),
            "--csv", str(csv_path),
        ]
    )
    out = capsys.readouterr().out
    assert rc == 0
    assert "sessions=1" in out
    assert csv_path.read_text().startswith("session_id,iteration_i,cos_sim")


def test_run_without_paths_fails(tmp_path, capsys):
    script_path = tmp_path / "bare.json"
    script_path.write_text(
        json.dumps({"kind": "reference1", "w1": "a", "w2": "b", "steps": []})
    )
    rc = main(["run", "--script", str(script_path)])
    assert rc == 2
    assert "corpus" in capsys.readouterr().err


def test_fixture_command(tmp_path, capsys):
    rc = main(["fixture", "--out", str(tmp_path / "demo")])
    assert rc == 0
    assert (tmp_path / "demo" / "corpus" / "manifest.json").is_file()
    assert (tmp_path / "demo" / "embeddings.txt").is_file()
