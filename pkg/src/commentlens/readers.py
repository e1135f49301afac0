"""Read-side payload builders over a pinned snapshot.

Both the HTTP service and the static `report` bundle writer produce their
JSON through this module, so the two serving modes are byte-compatible.
"""

from __future__ import annotations

from .analytics import BUCKETS, SORT_KEYS, sort_videos
from .models import CHANNEL_SCOPE, CorpusSnapshot
from .store import CommentFilter, Store


class ApiError(Exception):
    """Maps directly onto the wire error shape {status, code, message}."""

    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message

    def to_dict(self) -> dict:
        return {"status": self.status, "code": self.code, "message": self.message}


class SnapshotReader:
    """All queries a dashboard needs, answered against one snapshot."""

    def __init__(self, store: Store, snapshot: CorpusSnapshot):
        self.store = store
        self.snapshot = snapshot

    # ---- helpers -----------------------------------------------------------

    def _artifact(self, kind: str, scope: str) -> dict:
        key = self.snapshot.key_for(kind, scope)
        if key is None:
            raise ApiError(409, "not_computed",
                           f"artifact {kind!r} was not computed for this snapshot")
        blob = self.store.get_artifact(key)
        if blob is None:
            raise ApiError(500, "artifact_missing",
                           f"snapshot references missing artifact {kind}:{scope}")
        return blob

    def _require_video(self, video_id: str) -> None:
        if not self.store.has_video(video_id):
            raise ApiError(404, "video_not_found", f"unknown video {video_id!r}")

    def _envelope(self, **payload) -> dict:
        return {"snapshot_id": self.snapshot.snapshot_id, **payload}

    def _comment_dicts(self, comments) -> list[dict]:
        scalars = self.store.scalar_map([c.comment_id for c in comments])
        return [{**c.to_dict(), "sentiment": scalars.get(c.comment_id)}
                for c in comments]

    @staticmethod
    def _check_paging(page: int, page_size: int) -> None:
        if page < 1:
            raise ApiError(400, "invalid_page", f"page must be >= 1, got {page}")
        if not 1 <= page_size <= 500:
            raise ApiError(400, "invalid_page",
                           f"page_size must be in [1, 500], got {page_size}")

    # ---- channel tab ---------------------------------------------------------

    def channel(self) -> dict:
        return self._envelope(stats=self._artifact("stats", CHANNEL_SCOPE))

    def channel_report(self, kind: str) -> dict:
        artifact_kind = "themes_channel" if kind == "themes" else "suggestions_channel"
        return self._envelope(report=self._artifact(artifact_kind, CHANNEL_SCOPE))

    def topics(self) -> dict:
        blob = self._artifact("topics", CHANNEL_SCOPE)
        clusters = [{k: v for k, v in c.items() if k != "member_comment_ids"}
                    for c in blob["clusters"]]
        return self._envelope(clusters=clusters,
                              total_comments=blob["total_comments"])

    def topic_comments(self, cluster_id: int, page: int = 1,
                       page_size: int = 50) -> dict:
        self._check_paging(page, page_size)
        blob = self._artifact("topics", CHANNEL_SCOPE)
        row = next((c for c in blob["clusters"]
                    if c["cluster_id"] == cluster_id), None)
        if row is None:
            raise ApiError(404, "cluster_not_found",
                           f"no topic cluster {cluster_id}")
        member_ids = row["member_comment_ids"]
        start = (page - 1) * page_size
        chunk = member_ids[start:start + page_size]
        comments = self.store.comments_by_ids(chunk)
        return self._envelope(
            cluster_id=cluster_id, total=len(member_ids), page=page,
            page_size=page_size, comments=self._comment_dicts(comments))

    def alerts(self) -> dict:
        return self._envelope(alerts=self._artifact("alerts", CHANNEL_SCOPE)["alerts"])

    def superfans(self) -> dict:
        blob = self._artifact("superfans", CHANNEL_SCOPE)
        return self._envelope(superfans=blob["superfans"],
                              min_comments=blob["min_comments"])

    # ---- video tab -------------------------------------------------------------

    def videos(self, sort: str = "chronological", direction: str = "desc") -> dict:
        if sort not in SORT_KEYS:
            raise ApiError(400, "invalid_sort", f"unknown sort key {sort!r}")
        if direction not in ("asc", "desc"):
            raise ApiError(400, "invalid_sort", f"unknown direction {direction!r}")
        ordered = sort_videos(self.store.list_videos(), sort, direction)
        return self._envelope(videos=[v.to_dict() for v in ordered])

    def video_stats(self, video_id: str) -> dict:
        self._require_video(video_id)
        blob = self._artifact("stats", video_id)
        stats = {k: v for k, v in blob.items() if k != "timeseries"}
        return self._envelope(stats=stats)

    def video_report(self, video_id: str, kind: str) -> dict:
        self._require_video(video_id)
        artifact_kind = "themes_video" if kind == "themes" else "suggestions_video"
        return self._envelope(report=self._artifact(artifact_kind, video_id))

    def timeseries(self, video_id: str, bucket: str = "week") -> dict:
        if bucket not in BUCKETS:
            raise ApiError(400, "invalid_bucket", f"unknown bucket {bucket!r}")
        self._require_video(video_id)
        blob = self._artifact("stats", video_id)
        return self._envelope(video_id=video_id, bucket=bucket,
                              series=blob["timeseries"][bucket])

    def wordcloud(self, video_id: str, k: int = 100) -> dict:
        if k < 1:
            raise ApiError(400, "invalid_k", f"k must be >= 1, got {k}")
        self._require_video(video_id)
        blob = self._artifact("wordcloud", video_id)
        return self._envelope(video_id=video_id, terms=blob["terms"][:k])

    def comments(self, video_id: str, page: int = 1, page_size: int = 50) -> dict:
        self._check_paging(page, page_size)
        self._require_video(video_id)
        result = self.store.query_comments(
            CommentFilter(video_id=video_id), page=page, page_size=page_size,
            max_rowid=self.snapshot.comment_hwm)
        return self._envelope(total=result.total, page=result.page,
                              page_size=result.page_size,
                              comments=self._comment_dicts(result.items))


def resolve_snapshot(store: Store, snapshot_id: int | None) -> CorpusSnapshot:
    if snapshot_id is None:
        snapshot = store.current_snapshot()
        if snapshot is None:
            raise ApiError(409, "no_snapshot",
                           "no published snapshot; run the pipeline first")
        return snapshot
    snapshot = store.get_snapshot(snapshot_id)
    if snapshot is None:
        raise ApiError(404, "snapshot_not_found", f"no snapshot {snapshot_id}")
    return snapshot
