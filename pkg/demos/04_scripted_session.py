#!/usr/bin/env python3
"""A full headless session on the demo corpus, driven by a script.

Builds the demo fixtures in a scratch directory, runs a steering
(query-updating) session with a few deletes and moves, and prints what
each iteration searched for and placed.

Run:  python3 demos/04_scripted_session.py
"""

import tempfile
from pathlib import Path

from moodboard import fixtures, imagery
from moodboard.script import run_script, validate_script
from moodboard.session import SessionEngine, SessionStorage

workdir = Path(tempfile.mkdtemp(prefix="mbc-demo-"))
fixtures.write_demo_corpus(workdir / "corpus")
store = fixtures.build_demo_store()
source = imagery.FixtureCorpusSource(imagery.load_corpus(workdir / "corpus" / "manifest.json"))

script = validate_script(
    {
        "kind": "proposed",
        "w1": "ergonomic",
        "w2": "comfortable",
        "seed": 7,
        "steps": [
            {"action": "move", "cell": [1, 1], "to": [2, 3]},
            {"action": "delete", "cell": [3, 1]},
            {"action": "delete", "cell": [1, 2]},
            {"action": "next"},
            {"action": "delete", "cell": [2, 1]},
            {"action": "next"},
            {"action": "export"},
        ],
    }
)

engine = SessionEngine(store=store, source=source, storage=SessionStorage(workdir / "sessions"))
result = run_script(script, engine)

print(f"session {result.session.id} ({result.session.kind.value})")
for record in result.records:
    placed = ", ".join(f"{img.id}@({img.x},{img.y})" for img in record.images)
    print(f"\niteration {record.iteration_id}")
    print(f"  query:      {' + '.join(record.query)}")
    if record.top_n_words:
        print(f"  candidates: {', '.join(record.top_n_words[:8])} ...")
    print(f"  board:      {placed}")
    print(f"  cos(U, w1)={record.cos_w1_u:.4f}  cos(U, w2)={record.cos_w2_u:.4f}")

export = result.exports[0]
print(f"\nexported board document has {len(export['cells'])} cells;")
print(f"final query: {' + '.join(export['query'])}")
print(f"\nsession directory: {workdir / 'sessions' / result.session.id}")
print("replaying this script reproduces the log byte-for-byte (timestamps aside).")
