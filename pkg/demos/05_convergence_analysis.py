#!/usr/bin/env python3
"""Convergence diagnostics: cosine similarity between consecutive
board vectors, recomputed offline from the session log.

A session that replaces fewer images each iteration converges: the
series cos(U_i, U_{i-1}) climbs toward 1. The log stores labels,
scores, and cell coordinates, which is everything needed to rebuild
each U, so the analysis runs on the JSONL file alone.

Run:  python3 demos/05_convergence_analysis.py
"""

import tempfile
from pathlib import Path

from moodboard import analysis, fixtures, imagery
from moodboard.config import EngineConfig
from moodboard.script import run_script, validate_script
from moodboard.session import SessionEngine, SessionStorage

workdir = Path(tempfile.mkdtemp(prefix="mbc-demo-"))
fixtures.write_convergence_corpus(workdir / "corpus")
store = fixtures.build_demo_store()
source = imagery.FixtureCorpusSource(imagery.load_corpus(workdir / "corpus" / "manifest.json"))

all_cells = [[x, y] for y in (3, 2, 1) for x in (1, 2, 3)]
steps = [{"action": "delete", "cell": c} for c in all_cells]
steps += [{"action": "next"}]
steps += [{"action": "delete", "cell": c} for c in ([3, 1], [1, 2], [2, 1], [1, 1])]
steps += [{"action": "next"}]
steps += [{"action": "delete", "cell": c} for c in ([2, 1], [1, 1])]
steps += [{"action": "next"}]
steps += [{"action": "delete", "cell": [1, 1]}, {"action": "next"}]

script = validate_script(
    {
        "kind": "reference1", "w1": "ergonomic", "w2": "comfortable",
        "seed": 17, "steps": steps,
    }
)
engine = SessionEngine(store=store, source=source, storage=SessionStorage(workdir / "sessions"))
result = run_script(script, engine)
log_path = workdir / "sessions" / result.session.id / "records.jsonl"

records = analysis.read_log(log_path)
pw = EngineConfig().position_weights
series = analysis.convergence_series(records, store, pw)

print("images replaced per iteration: 9, 4, 2, 1")
print("cos(U_i, U_{i-1}) series recomputed from the log:")
for i, value in enumerate(series.values, start=1):
    bar = "#" * int((value - 0.998) * 20000) if value > 0.998 else ""
    print(f"  step {i}: {value:.6f} {bar}")

stats = analysis.session_stats(series)
print(f"\nfirst step similarity: {stats.first_step_similarity:.6f}")
print(f"series mean {stats.mean:.6f}, min {stats.min:.6f}, max {stats.max:.6f}")

csv_path = workdir / "series.csv"
analysis.write_csv([series], csv_path)
print(f"\nCSV written to {csv_path}:")
print(csv_path.read_text())
