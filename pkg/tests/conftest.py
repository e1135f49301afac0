"""Shared fixtures: temp stores, corpus builders, a fake YouTube API."""

from __future__ import annotations

import json
import math
import os
from datetime import datetime, timedelta, timezone

import pytest

from commentlens.config import AppConfig
from commentlens.errors import QuotaExhaustedError
from commentlens.ingest import CommentsDisabled, YouTubeClient
from commentlens.models import ChannelRef, CommentRecord, VideoRecord
from commentlens.store import Store

UTC = timezone.utc
T0 = datetime(2023, 1, 2, 12, 0, 0, tzinfo=UTC)  # a Monday
FETCHED = datetime(2024, 2, 1, tzinfo=UTC)

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DEMO_DIR = os.path.join(REPO_ROOT, "demo")


def ts(days: float = 0.0, hours: float = 0.0) -> datetime:
    return T0 + timedelta(days=days, hours=hours)


def make_video(video_id: str = "v1", title: str = "Video One",
               published: datetime | None = None, views: int = 100,
               likes: int = 10, reported: int = 0,
               channel_id: str = "UCtest") -> VideoRecord:
    return VideoRecord(
        video_id=video_id, channel_id=channel_id, title=title,
        published_at=published or T0, view_count=views, like_count=likes,
        comment_count_reported=reported, fetched_at=FETCHED)


def make_comment(comment_id: str, video_id: str = "v1", text: str = "a comment",
                 published: datetime | None = None, author: str = "UCa1",
                 display: str = "author one", parent: str | None = None,
                 likes: int = 0) -> CommentRecord:
    return CommentRecord(
        comment_id=comment_id, video_id=video_id, parent_id=parent,
        author_id=author, author_display=display, text=text,
        published_at=published or T0, like_count=likes)


@pytest.fixture
def store(tmp_path) -> Store:
    return Store(str(tmp_path / "test.db"))


@pytest.fixture
def cfg(tmp_path) -> AppConfig:
    config = AppConfig()
    config.db_path = str(tmp_path / "test.db")
    return config


def seed_store(store: Store, n_videos: int = 1, comments_per_video: int = 0,
               channel_id: str = "UCtest"):
    """Minimal populated store; returns the video records."""
    store.upsert_channel(ChannelRef(channel_id, "Test Channel"))
    videos = [make_video(f"v{i + 1}", f"Video {i + 1}",
                         published=ts(days=i), channel_id=channel_id)
              for i in range(n_videos)]
    store.upsert_videos(videos)
    comments = []
    for v in videos:
        for j in range(comments_per_video):
            comments.append(make_comment(
                f"{v.video_id}-c{j:03d}", v.video_id,
                text=f"comment {j} on {v.video_id}",
                published=ts(days=j % 30, hours=j % 24),
                author=f"UCa{j % 7}", display=f"author {j % 7}"))
    if comments:
        store.upsert_comments(comments)
    return videos


def write_bundle(path, channel: dict, videos: list[dict], comments: list[dict]):
    os.makedirs(path, exist_ok=True)
    for name, payload in (("channel.json", channel), ("videos.json", videos),
                          ("comments.json", comments)):
        with open(os.path.join(path, name), "w", encoding="utf-8") as fh:
            json.dump(payload, fh)
    return str(path)


def video_dict(video_id: str = "v1", title: str = "Video One",
               published: str = "2023-01-02T12:00:00Z", **extra) -> dict:
    return {"video_id": video_id, "title": title, "published_at": published,
            "view_count": 100, "like_count": 10, "comment_count_reported": 0,
            "fetched_at": "2024-02-01T00:00:00Z", **extra}


def comment_dict(comment_id: str, video_id: str = "v1", text: str = "hello world",
                 published: str = "2023-01-03T00:00:00Z", **extra) -> dict:
    return {"comment_id": comment_id, "video_id": video_id, "text": text,
            "published_at": published, "author_id": "UCa1",
            "author_display": "author one", "like_count": 0, **extra}


class FakeYouTube:
    """Canned YouTube Data API: channels, playlists, videos, comment threads.

    State is a dict: {channel_id: {"title", "videos": [{"id", "title",
    "publishedAt", "views", "likes", "comments": [{"id", "text",
    "publishedAt", "author", "replies": [...]}], "disabled": bool}]}}.
    Supports pageToken pagination and scripted quota failures.
    """

    def __init__(self, state: dict, page_size: int = 2):
        self.state = state
        self.page_size = page_size
        self.calls = 0
        self.fail_after: int | None = None  # raise quota error after N calls
        self._lock = __import__("threading").Lock()

    def _maybe_fail(self):
        with self._lock:
            self.calls += 1
            calls = self.calls
        if self.fail_after is not None and calls > self.fail_after:
            raise QuotaExhaustedError("scripted quota exhaustion")

    def _paginate(self, items: list, token: str | None):
        start = int(token) if token else 0
        page = items[start:start + self.page_size]
        next_token = str(start + self.page_size) \
            if start + self.page_size < len(items) else None
        return page, next_token

    def get(self, endpoint: str, params: dict) -> dict:
        self._maybe_fail()
        if endpoint == "channels":
            ch = self.state.get(params["id"])
            if ch is None:
                return {"items": []}
            return {"items": [{
                "snippet": {"title": ch["title"]},
                "contentDetails": {"relatedPlaylists": {
                    "uploads": f"UU{params['id']}"}}}]}
        if endpoint == "playlistItems":
            channel_id = params["playlistId"][2:]
            videos = self.state[channel_id]["videos"]
            page, token = self._paginate(videos, params.get("pageToken"))
            body = {"items": [{"contentDetails": {"videoId": v["id"]}}
                              for v in page]}
            if token:
                body["nextPageToken"] = token
            return body
        if endpoint == "videos":
            wanted = set(params["id"].split(","))
            items = []
            for ch in self.state.values():
                for v in ch["videos"]:
                    if v["id"] in wanted:
                        items.append({
                            "id": v["id"],
                            "snippet": {"title": v["title"],
                                        "publishedAt": v["publishedAt"]},
                            "statistics": {"viewCount": str(v.get("views", 0)),
                                           "likeCount": str(v.get("likes", 0)),
                                           "commentCount": str(len(v.get("comments", [])))}})
            return {"items": items}
        if endpoint == "commentThreads":
            video = self._find_video(params["videoId"])
            if video.get("disabled"):
                raise CommentsDisabled()
            threads = sorted(video.get("comments", []),
                             key=lambda c: c["publishedAt"], reverse=True)
            page, token = self._paginate(threads, params.get("pageToken"))
            items = []
            for thread in page:
                replies = thread.get("replies", [])
                items.append({
                    "id": thread["id"],
                    "snippet": {
                        "topLevelComment": self._comment_item(thread),
                        "totalReplyCount": len(replies),
                    },
                    "replies": {"comments": [
                        {**self._comment_item(r),
                         "snippet": {**self._comment_item(r)["snippet"],
                                     "parentId": thread["id"]}}
                        for r in replies]},
                })
            body = {"items": items}
            if token:
                body["nextPageToken"] = token
            return body
        if endpoint == "comments":
            raise AssertionError("inline replies cover all fake threads")
        raise AssertionError(f"unexpected endpoint {endpoint}")

    def _find_video(self, video_id: str) -> dict:
        for ch in self.state.values():
            for v in ch["videos"]:
                if v["id"] == video_id:
                    return v
        raise AssertionError(f"fake API has no video {video_id}")

    @staticmethod
    def _comment_item(c: dict) -> dict:
        return {"id": c["id"], "snippet": {
            "authorDisplayName": c.get("display", "someone"),
            "authorChannelId": {"value": c.get("author", "UCx")},
            "textOriginal": c["text"],
            "publishedAt": c["publishedAt"],
            "likeCount": c.get("likes", 0)}}


def fake_client(state: dict, page_size: int = 2) -> tuple[YouTubeClient, FakeYouTube]:
    fake = FakeYouTube(state, page_size)
    return YouTubeClient(fake), fake


def fake_state(n_videos: int = 3, comments_per_video: int = 0,
               channel_id: str = "UCtest") -> dict:
    videos = []
    for i in range(n_videos):
        comments = []
        for j in range(comments_per_video):
            comments.append({
                "id": f"v{i + 1}-c{j:03d}", "text": f"fake comment {j}",
                "publishedAt": (T0 + timedelta(days=i, hours=j)).strftime(
                    "%Y-%m-%dT%H:%M:%SZ"),
                "author": f"UCa{j % 5}", "display": f"author {j % 5}"})
        videos.append({"id": f"v{i + 1}", "title": f"Fake Video {i + 1}",
                       "publishedAt": (T0 + timedelta(days=i)).strftime(
                           "%Y-%m-%dT%H:%M:%SZ"),
                       "views": 100 * (i + 1), "likes": 10 * (i + 1),
                       "comments": comments})
    return {channel_id: {"title": "Fake Channel", "videos": videos}}


def assert_close(a: float, b: float, tol: float = 1e-9):
    assert math.isfinite(a) and math.isfinite(b)
    assert abs(a - b) <= tol, f"{a} != {b} within {tol}"
