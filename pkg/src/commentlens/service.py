"""Read-only HTTP API over published snapshots.

Every response embeds the snapshot_id it was answered from; ?snapshot= pins
a request to an older snapshot. All writes happen through the CLI pipeline,
never through this API.
"""

from __future__ import annotations

import threading

from fastapi import Depends, FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .readers import ApiError, SnapshotReader, resolve_snapshot
from .store import Store


class _StorePool:
    """One read-only connection per serving thread."""

    def __init__(self, db_path: str):
        self.db_path = db_path
        self._local = threading.local()

    def get(self) -> Store:
        store = getattr(self._local, "store", None)
        if store is None:
            store = Store(self.db_path, read_only=True)
            self._local.store = store
        return store


def create_app(db_path: str, static_dir: str | None = None,
               cors_origins: list[str] | None = None) -> FastAPI:
    app = FastAPI(title="commentlens", docs_url=None, redoc_url=None)
    pool = _StorePool(db_path)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins or ["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content=exc.to_dict())

    @app.exception_handler(Exception)
    async def _internal_error(_request: Request, exc: Exception):
        return JSONResponse(status_code=500, content={
            "status": 500, "code": "internal_error", "message": str(exc)})

    def reader(snapshot: int | None = Query(default=None)) -> SnapshotReader:
        store = pool.get()
        return SnapshotReader(store, resolve_snapshot(store, snapshot))

    @app.get("/api/channel")
    def channel(r: SnapshotReader = Depends(reader)):
        return r.channel()

    @app.get("/api/channel/themes")
    def channel_themes(r: SnapshotReader = Depends(reader)):
        return r.channel_report("themes")

    @app.get("/api/channel/suggestions")
    def channel_suggestions(r: SnapshotReader = Depends(reader)):
        return r.channel_report("suggestions")

    @app.get("/api/channel/topics")
    def channel_topics(r: SnapshotReader = Depends(reader)):
        return r.topics()

    @app.get("/api/channel/topics/{cluster_id}/comments")
    def topic_comments(cluster_id: int, page: int = 1, page_size: int = 50,
                       r: SnapshotReader = Depends(reader)):
        return r.topic_comments(cluster_id, page, page_size)

    @app.get("/api/channel/alerts")
    def channel_alerts(r: SnapshotReader = Depends(reader)):
        return r.alerts()

    @app.get("/api/channel/superfans")
    def channel_superfans(r: SnapshotReader = Depends(reader)):
        return r.superfans()

    @app.get("/api/videos")
    def videos(sort: str = "chronological", direction: str = "desc",
               r: SnapshotReader = Depends(reader)):
        return r.videos(sort, direction)

    @app.get("/api/videos/{video_id}/stats")
    def video_stats(video_id: str, r: SnapshotReader = Depends(reader)):
        return r.video_stats(video_id)

    @app.get("/api/videos/{video_id}/themes")
    def video_themes(video_id: str, r: SnapshotReader = Depends(reader)):
        return r.video_report(video_id, "themes")

    @app.get("/api/videos/{video_id}/suggestions")
    def video_suggestions(video_id: str, r: SnapshotReader = Depends(reader)):
        return r.video_report(video_id, "suggestions")

    @app.get("/api/videos/{video_id}/timeseries")
    def video_timeseries(video_id: str, bucket: str = "week",
                         r: SnapshotReader = Depends(reader)):
        return r.timeseries(video_id, bucket)

    @app.get("/api/videos/{video_id}/wordcloud")
    def video_wordcloud(video_id: str, k: int = 100,
                        r: SnapshotReader = Depends(reader)):
        return r.wordcloud(video_id, k)

    @app.get("/api/videos/{video_id}/comments")
    def video_comments(video_id: str, page: int = 1, page_size: int = 50,
                       r: SnapshotReader = Depends(reader)):
        return r.comments(video_id, page, page_size)

    if static_dir:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def serve(db_path: str, host: str = "127.0.0.1", port: int = 8321,
          static_dir: str | None = None,
          cors_origins: list[str] | None = None) -> None:
    """Bind (port 0 picks an ephemeral port), print the address, serve."""
    import socket

    import uvicorn

    app = create_app(db_path, static_dir=static_dir, cors_origins=cors_origins)
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    sock.bind((host, port))
    bound_port = sock.getsockname()[1]
    print(f"serving on http://{host}:{bound_port}", flush=True)
    config = uvicorn.Config(app, log_level="warning")
    server = uvicorn.Server(config)
    server.run(sockets=[sock])
