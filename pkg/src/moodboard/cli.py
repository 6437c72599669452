"""Command line entry points.

    mbc serve --corpus manifest.json --embeddings vectors.txt [--port 8000]
    mbc run --script session.json [--corpus ...] [--embeddings ...] [--out DIR]
    mbc analyze --log records.jsonl --embeddings vectors.txt [--csv out.csv]
    mbc embeddings info vectors.txt [--limit N]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import analysis, embedding, fixtures, imagery, script as script_mod
from .config import EngineConfig, load_config
from .errors import MoodboardError
from .session import SessionEngine, SessionStorage


def _load_engine_parts(args) -> tuple:
    config = load_config(args.config) if getattr(args, "config", None) else EngineConfig()
    store = embedding.load_store(args.embeddings, limit=getattr(args, "limit", None))
    manifest = imagery.load_corpus(args.corpus, labels_per_image=config.labels_per_image)
    source = imagery.FixtureCorpusSource(manifest)
    return store, source, config


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    store, source, config = _load_engine_parts(args)
    storage = SessionStorage(args.sessions_dir)
    engine = SessionEngine(store=store, source=source, config=config, storage=storage)
    app = create_app(engine, images=source)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def cmd_run(args) -> int:
    loaded = script_mod.load_script(args.script)
    corpus = args.corpus or loaded.corpus
    embeddings_path = args.embeddings or loaded.embeddings
    if not corpus or not embeddings_path:
        print("error: script does not name corpus/embeddings; pass --corpus/--embeddings",
              file=sys.stderr)
        return 2
    config = load_config(args.config) if args.config else EngineConfig()
    store = embedding.load_store(embeddings_path)
    source = imagery.FixtureCorpusSource(
        imagery.load_corpus(corpus, labels_per_image=config.labels_per_image)
    )
    storage = SessionStorage(args.out)
    engine = SessionEngine(store=store, source=source, config=config, storage=storage)
    result = script_mod.run_script(loaded, engine)
    session = result.session
    print(f"session {session.id}: {session.iteration_count} iteration(s), "
          f"{len(result.exports)} export(s)")
    print(f"log: {Path(args.out) / session.id / 'records.jsonl'}")
    for record in result.records:
        print(f"  iteration {record.iteration_id}: query={' '.join(record.query)} "
              f"images={len(record.images)}")
    return 0


def cmd_analyze(args) -> int:
    store = embedding.load_store(args.embeddings)
    config = load_config(args.config) if args.config else EngineConfig()
    series_list, stats = analysis.analyze_log(args.log, store, config.position_weights)
    for series in series_list:
        values = " ".join(f"{v:.4f}" for v in series.values)
        print(f"{series.session_id}: iterations={series.iteration_count} cosines=[{values}]")
    print(f"sessions={stats.session_count} "
          f"mean_iterations={stats.mean_iteration_count:.2f} (sd {stats.std_iteration_count:.2f}) "
          f"first_step={stats.mean_first_step_similarity:.4f} (sd {stats.std_first_step_similarity:.4f}) "
          f"mean_cos={stats.mean_similarity:.4f} (sd {stats.std_similarity:.4f})")
    if args.csv:
        analysis.write_csv(series_list, args.csv)
        print(f"csv: {args.csv}")
    return 0


def cmd_embeddings_info(args) -> int:
    store = embedding.load_store(args.file, limit=args.limit)
    import numpy as np

    norms = np.linalg.norm(store.matrix, axis=1)
    print(f"words: {len(store)}")
    print(f"dimensions: {store.dim}")
    print(f"max |norm - 1|: {float(np.max(np.abs(norms - 1))):.2e}")
    sample = ", ".join(store.vocab[:8])
    print(f"first words: {sample}")
    return 0


def cmd_fixture(args) -> int:
    target = Path(args.out)
    manifest = fixtures.write_demo_corpus(target / "corpus")
    embeddings_path = fixtures.write_demo_embeddings(target / "embeddings.txt")
    print(f"corpus manifest: {manifest}")
    print(f"embeddings: {embeddings_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mbc", description="mood board composition engine")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP API")
    serve.add_argument("--corpus", required=True, help="corpus manifest JSON")
    serve.add_argument("--embeddings", required=True, help="embedding text file")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--config", help="JSON config overrides")
    serve.add_argument("--sessions-dir", default="mbc-sessions")
    serve.add_argument("--limit", type=int, help="load at most N embedding words")
    serve.set_defaults(func=cmd_serve)

    run = sub.add_parser("run", help="run a scripted session headlessly")
    run.add_argument("--script", required=True)
    run.add_argument("--corpus", help="overrides the script's corpus path")
    run.add_argument("--embeddings", help="overrides the script's embeddings path")
    run.add_argument("--config", help="JSON config overrides")
    run.add_argument("--out", default="mbc-sessions", help="sessions directory")
    run.set_defaults(func=cmd_run)

    analyze = sub.add_parser("analyze", help="convergence diagnostics for a session log")
    analyze.add_argument("--log", required=True, help="records.jsonl file")
    analyze.add_argument("--embeddings", required=True, help="embedding text file")
    analyze.add_argument("--config", help="JSON config overrides (position weights)")
    analyze.add_argument("--csv", help="also write per-iteration cosines as CSV")
    analyze.set_defaults(func=cmd_analyze)

    emb = sub.add_parser("embeddings", help="embedding file utilities")
    emb_sub = emb.add_subparsers(dest="subcommand", required=True)
    info = emb_sub.add_parser("info", help="validate and describe an embedding file")
    info.add_argument("file")
    info.add_argument("--limit", type=int)
    info.set_defaults(func=cmd_embeddings_info)

    fixture = sub.add_parser("fixture", help="write the demo corpus and embeddings")
    fixture.add_argument("--out", default="demo-fixtures")
    fixture.set_defaults(func=cmd_fixture)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MoodboardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
