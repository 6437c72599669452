"""Headless scripted sessions: a JSON file drives a full session for
reproducible replays and offline studies.

Script shape:
    {
      "kind": "reference1", "w1": "...", "w2": "...", "seed": 7,
      "config": {...optional overrides...},
      "corpus": "path/to/manifest.json",      # optional, CLI may override
      "embeddings": "path/to/embeddings.txt", # optional, CLI may override
      "steps": [
        {"action": "move", "image": "id", "to": [2, 3]},
        {"action": "delete", "cell": [1, 1]},
        {"action": "strike", "image": "id", "label": "couch"},
        {"action": "next"},
        {"action": "export"}
      ]
    }

The session id is derived from the script content, so two runs of the
same script produce byte-identical logs apart from timestamps.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .config import EngineConfig
from .errors import MoodboardError, ScriptError, ValidationError
from .session import IterationRecord, Session, SessionEngine, SessionStorage

STEP_ACTIONS = ("move", "delete", "strike", "next", "export")


@dataclass(frozen=True)
class SessionScript:
    kind: str
    w1: str
    w2: str
    seed: int
    steps: list[dict]
    config: dict | None = None
    corpus: str | None = None
    embeddings: str | None = None

    def session_id(self) -> str:
        key = json.dumps(
            {"kind": self.kind, "w1": self.w1, "w2": self.w2, "seed": self.seed,
             "config": self.config, "steps": self.steps},
            sort_keys=True,
        )
        return "script-" + hashlib.sha256(key.encode("utf-8")).hexdigest()[:12]


def validate_script(doc: dict) -> SessionScript:
    for key in ("kind", "w1", "w2"):
        if not isinstance(doc.get(key), str) or not doc.get(key):
            raise ValidationError(f"script needs a non-empty string {key!r}")
    steps = doc.get("steps", [])
    if not isinstance(steps, list):
        raise ValidationError("script 'steps' must be a list")
    for i, step in enumerate(steps):
        if not isinstance(step, dict) or step.get("action") not in STEP_ACTIONS:
            raise ValidationError(
                f"step {i}: action must be one of {STEP_ACTIONS}, got {step!r}"
            )
    return SessionScript(
        kind=doc["kind"],
        w1=doc["w1"],
        w2=doc["w2"],
        seed=int(doc.get("seed", 0)),
        steps=steps,
        config=doc.get("config"),
        corpus=doc.get("corpus"),
        embeddings=doc.get("embeddings"),
    )


def load_script(path: str | Path) -> SessionScript:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read script {path}: {exc}") from exc
    return validate_script(doc)


@dataclass
class ScriptResult:
    session: Session
    records: list[IterationRecord]
    exports: list[dict] = field(default_factory=list)


def run_script(
    script: SessionScript,
    engine: SessionEngine,
    session_id: str | None = None,
) -> ScriptResult:
    """Execute a script on an engine; any failing step aborts with its index."""
    session = engine.create_session(
        kind=script.kind,
        w1=script.w1,
        w2=script.w2,
        seed=script.seed,
        config_overrides=script.config,
        session_id=session_id or script.session_id(),
    )
    exports: list[dict] = []
    for i, step in enumerate(script.steps):
        try:
            action = step["action"]
            if action == "next":
                engine.next_iteration(session.id)
            elif action == "export":
                exports.append(engine.export_board(session.id))
            else:
                engine.apply_action(session.id, {"type": action, **{
                    k: v for k, v in step.items() if k != "action"
                }})
        except MoodboardError as exc:
            raise ScriptError(i, exc) from exc
    return ScriptResult(session=session, records=list(session.records), exports=exports)


def run_script_file(
    path: str | Path,
    store,
    source,
    config: EngineConfig | None = None,
    storage: SessionStorage | None = None,
) -> ScriptResult:
    """Load and run a script; script-level config overrides apply on top
    of the engine config passed here."""
    script = load_script(path)
    engine = SessionEngine(
        store=store, source=source, config=config or EngineConfig(), storage=storage
    )
    return run_script(script, engine)
