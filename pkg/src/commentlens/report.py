"""Dump the current snapshot as a static JSON bundle.

The bundle mirrors the API's response shapes file by file, so the dashboard
renders identically whether it talks to the live service or opens a bundle.
Pagination depth is fixed at export time (first page per list).
"""

from __future__ import annotations

import json
import os

from .models import CHANNEL_SCOPE
from .readers import ApiError, SnapshotReader, resolve_snapshot
from .store import Store
from .utils import to_iso

_PAGE_SIZE = 50


def _write(path: str, payload: dict) -> None:
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, indent=1)


def write_report(store: Store, out_dir: str,
                 snapshot_id: int | None = None) -> dict:
    """Write the bundle; returns the manifest. Uncomputed artifacts are
    skipped (the UI shows its usual not-computed placeholder for them)."""
    snapshot = resolve_snapshot(store, snapshot_id)
    reader = SnapshotReader(store, snapshot)
    written: list[str] = []

    def emit(rel_path: str, build) -> dict | None:
        try:
            payload = build()
        except ApiError as exc:
            if exc.code in ("not_computed", "cluster_not_found"):
                return None
            raise
        _write(os.path.join(out_dir, rel_path), payload)
        written.append(rel_path)
        return payload

    emit("channel.json", reader.channel)
    emit("channel_themes.json", lambda: reader.channel_report("themes"))
    emit("channel_suggestions.json", lambda: reader.channel_report("suggestions"))
    topics_payload = emit("channel_topics.json", reader.topics)
    emit("channel_alerts.json", reader.alerts)
    emit("channel_superfans.json", reader.superfans)
    videos_payload = emit("videos.json", lambda: reader.videos("chronological", "desc"))

    if topics_payload:
        for row in topics_payload["clusters"]:
            cid = row["cluster_id"]
            emit(f"topics/{cid}/comments_page_1.json",
                 lambda cid=cid: reader.topic_comments(cid, 1, _PAGE_SIZE))

    if videos_payload:
        for video in videos_payload["videos"]:
            vid = video["video_id"]
            emit(f"videos/{vid}/stats.json", lambda v=vid: reader.video_stats(v))
            emit(f"videos/{vid}/themes.json",
                 lambda v=vid: reader.video_report(v, "themes"))
            emit(f"videos/{vid}/suggestions.json",
                 lambda v=vid: reader.video_report(v, "suggestions"))
            emit(f"videos/{vid}/wordcloud.json", lambda v=vid: reader.wordcloud(v))
            for bucket in ("day", "week", "month"):
                emit(f"videos/{vid}/timeseries_{bucket}.json",
                     lambda v=vid, b=bucket: reader.timeseries(v, b))
            emit(f"videos/{vid}/comments_page_1.json",
                 lambda v=vid: reader.comments(v, 1, _PAGE_SIZE))

    manifest = {
        "snapshot_id": snapshot.snapshot_id,
        "created_at": to_iso(snapshot.created_at),
        "video_count": snapshot.video_count,
        "comment_count": snapshot.comment_count,
        "page_size": _PAGE_SIZE,
        "files": sorted(written),
    }
    _write(os.path.join(out_dir, "manifest.json"), manifest)
    return manifest
