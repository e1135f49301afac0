"""Command-line entry point: ingest, analyze, serve, report, config validate.

Commands exit 0 on success and non-zero with a one-line machine-parsable
error ("error code=<code> message=<...>") otherwise.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .config import AppConfig, load_config
from .errors import CommentLensError
from .models import CHANNEL_SCOPE  # noqa: F401  (re-exported for scripts)
from .pipeline import ANALYSIS_STAGES, PipelineRunSpec, run_pipeline
from .store import Store


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="commentlens",
        description="Audience comment analytics: ingest, analyze, serve.")
    parser.add_argument("-c", "--config", default=None,
                        help="path to the YAML config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="collect channel data")
    group = p_ingest.add_mutually_exclusive_group(required=True)
    group.add_argument("--channel", help="YouTube channel id to fetch")
    group.add_argument("--fixture", help="path to a fixture bundle directory")
    p_ingest.add_argument("--sync", action="store_true",
                          help="incremental sync instead of a full fetch")

    p_analyze = sub.add_parser("analyze", help="run analysis stages and publish")
    p_analyze.add_argument("--stages", default=",".join(ANALYSIS_STAGES),
                           help="comma-separated stages "
                                f"(default: {','.join(ANALYSIS_STAGES)})")
    p_analyze.add_argument("--seed", type=int, default=None)

    p_serve = sub.add_parser("serve", help="serve the read-only API")
    p_serve.add_argument("--port", type=int, default=None)
    p_serve.add_argument("--host", default=None)
    p_serve.add_argument("--static", default=None,
                         help="directory of built dashboard assets to serve at /")

    p_report = sub.add_parser("report", help="dump the snapshot as static JSON")
    p_report.add_argument("--out", required=True)
    p_report.add_argument("--snapshot", type=int, default=None)

    p_config = sub.add_parser("config", help="config utilities")
    p_config.add_argument("action", choices=["validate"])
    return parser


def _cmd_ingest(cfg: AppConfig, args) -> int:
    from . import ingest as ingest_mod
    store = Store(cfg.db_path)
    if args.fixture:
        manifest = ingest_mod.ingest_fixture(store, args.fixture)
    else:
        api_key = os.environ.get(cfg.ingest.api_key_env, "")
        transport = ingest_mod.HttpTransport(
            api_key, cfg.ingest.requests_per_minute, cfg.ingest.max_retries)
        client = ingest_mod.YouTubeClient(transport, cfg.ingest)
        if args.sync:
            manifest = ingest_mod.incremental_sync(store, client, args.channel)
        else:
            manifest = ingest_mod.ingest_channel(store, client, args.channel)
    print(f"ingested videos={manifest.videos_fetched} "
          f"comments={manifest.comments_fetched} "
          f"pages={manifest.pages_consumed}")
    return 0


def _cmd_analyze(cfg: AppConfig, args) -> int:
    stages = tuple(s.strip() for s in args.stages.split(",") if s.strip())
    store = Store(cfg.db_path)
    snapshot = run_pipeline(store, PipelineRunSpec(
        stages=stages, seed=args.seed, config=cfg))
    degraded = f" degraded={len(snapshot.degraded)}" if snapshot.degraded else ""
    print(f"published snapshot={snapshot.snapshot_id} "
          f"videos={snapshot.video_count} comments={snapshot.comment_count}"
          f"{degraded}")
    return 0


def _cmd_serve(cfg: AppConfig, args) -> int:
    from .service import serve
    serve(cfg.db_path,
          host=args.host if args.host is not None else cfg.server.host,
          port=args.port if args.port is not None else cfg.server.port,
          static_dir=args.static,
          cors_origins=cfg.server.cors_origins)
    return 0


def _cmd_report(cfg: AppConfig, args) -> int:
    from .report import write_report
    store = Store(cfg.db_path)
    manifest = write_report(store, args.out, args.snapshot)
    print(f"wrote {len(manifest['files'])} files for "
          f"snapshot={manifest['snapshot_id']} to {args.out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        if args.command == "config":
            print("config ok")
            return 0
        if args.command == "ingest":
            return _cmd_ingest(cfg, args)
        if args.command == "analyze":
            return _cmd_analyze(cfg, args)
        if args.command == "serve":
            return _cmd_serve(cfg, args)
        if args.command == "report":
            return _cmd_report(cfg, args)
        raise AssertionError(f"unhandled command {args.command}")
    except CommentLensError as exc:
        print(f"error code={exc.code} message={exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        return 130


if __name__ == "__main__":
    sys.exit(main())
