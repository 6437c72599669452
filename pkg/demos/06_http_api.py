#!/usr/bin/env python3
"""The HTTP API end to end: start a real server on the demo fixtures,
create sessions of each variant, and show the capability matrix in
action (move rejected on the refill variant, strike only on the
label-feedback variant, iteration rejected on the baseline).

Run:  python3 demos/06_http_api.py
"""

import tempfile
import threading
import time
from pathlib import Path

import httpx
import uvicorn

from moodboard import fixtures, imagery
from moodboard.service import create_app
from moodboard.session import SessionEngine, SessionStorage

workdir = Path(tempfile.mkdtemp(prefix="mbc-demo-"))
fixtures.write_demo_corpus(workdir / "corpus")
store = fixtures.build_demo_store()
source = imagery.FixtureCorpusSource(imagery.load_corpus(workdir / "corpus" / "manifest.json"))
engine = SessionEngine(store=store, source=source, storage=SessionStorage(workdir / "sessions"))

config = uvicorn.Config(create_app(engine, images=source), host="127.0.0.1", port=8931,
                        log_level="warning")
server = uvicorn.Server(config)
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.05)
base = "http://127.0.0.1:8931"
print(f"server listening at {base}\n")

with httpx.Client(base_url=base, timeout=10) as client:
    for kind in ("baseline", "reference1", "proposed", "reference2"):
        body = client.post(
            "/sessions",
            json={"kind": kind, "w1": "ergonomic", "w2": "comfortable", "seed": 11},
        ).json()
        caps = ", ".join(k for k, v in body["capabilities"].items() if v)
        print(f"{kind:<11s} -> session {body['id']} capabilities: {caps}")

    session = client.post(
        "/sessions", json={"kind": "reference2", "w1": "ergonomic", "w2": "comfortable", "seed": 4}
    ).json()
    sid = session["id"]
    cell = next(c for c in session["board"]["cells"] if c["image"])
    image_id = cell["image"]["id"]
    label = cell["image"]["labels"][0]["label"]

    print(f"\ndriving the reference2 session {sid}:")
    resp = client.post(f"/sessions/{sid}/actions",
                       json={"type": "move", "image": image_id, "to": [3, 3]})
    print(f"  move {image_id} to (3,3): HTTP {resp.status_code}")
    resp = client.post(f"/sessions/{sid}/actions",
                       json={"type": "strike", "image": image_id, "label": label})
    print(f"  strike label {label!r}: HTTP {resp.status_code}, "
          f"negatives now {resp.json()['negative_words']}")
    resp = client.post(f"/sessions/{sid}/next")
    record = resp.json()["record"]
    print(f"  next: HTTP {resp.status_code}, iteration {record['iteration_id']} "
          f"searched {' + '.join(record['query'])}")

    baseline = client.post(
        "/sessions", json={"kind": "baseline", "w1": "ergonomic", "w2": "comfortable", "seed": 4}
    ).json()
    resp = client.post(f"/sessions/{baseline['id']}/next")
    print(f"\nnext on a baseline session: HTTP {resp.status_code} ({resp.json()['error']})")

    resp = client.get(f"/sessions/{sid}/export")
    print(f"\nexport document: {sum(1 for c in resp.json()['cells'] if c['image'])} occupied cells")
    log_lines = client.get(f"/sessions/{sid}/log").text.strip().splitlines()
    print(f"log stream: {len(log_lines)} JSON lines")
    image_bytes = client.get(f"/images/{image_id}").content
    is_png = image_bytes[:8] == b"\x89PNG\r\n\x1a\n"
    print(f"image bytes for {image_id}: {len(image_bytes)} bytes (PNG={is_png})")

server.should_exit = True
thread.join(timeout=5)
print("\nserver stopped.")
