"""Ingestion: YouTube Data API v3 collection and fixture-bundle loading.

Both paths land in the same datastore upserts, so a fixture ingest is
indistinguishable from an API fetch that produced the same records. API
fetches are resumable: quota exhaustion persists an opaque cursor and the
next run continues where the last one stopped.
"""

from __future__ import annotations

import json
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Protocol

import httpx

from .config import IngestConfig
from .errors import (ChannelNotFoundError, CredentialError,
                     MalformedBundleError, QuotaExhaustedError)
from .models import ChannelRef, CommentRecord, FetchManifest, VideoRecord
from .store import Store
from .utils import parse_iso, utcnow

API_BASE = "https://www.googleapis.com/youtube/v3"


class Transport(Protocol):
    """One GET against the YouTube API; returns the parsed JSON body."""

    def get(self, endpoint: str, params: dict) -> dict: ...


class HttpTransport:
    """Real API transport: key injection, pacing, backoff on 429/5xx."""

    def __init__(self, api_key: str, requests_per_minute: int = 120,
                 max_retries: int = 5, base_url: str = API_BASE):
        if not api_key:
            raise CredentialError("no YouTube API key configured")
        self.api_key = api_key
        self.min_interval = 60.0 / max(requests_per_minute, 1)
        self.max_retries = max_retries
        self.base_url = base_url
        self._last_request = 0.0
        self._client = httpx.Client(timeout=30.0)

    def get(self, endpoint: str, params: dict) -> dict:
        wait = self._last_request + self.min_interval - time.monotonic()
        if wait > 0:
            time.sleep(wait)
        delay = 2.0
        for attempt in range(self.max_retries + 1):
            self._last_request = time.monotonic()
            resp = self._client.get(f"{self.base_url}/{endpoint}",
                                    params={**params, "key": self.api_key})
            if resp.status_code == 200:
                return resp.json()
            reason = _error_reason(resp)
            if resp.status_code in (400, 401) or reason in ("keyInvalid", "badRequest"):
                raise CredentialError(f"API rejected credentials: {reason}")
            if reason in ("quotaExceeded", "dailyLimitExceeded"):
                raise QuotaExhaustedError("YouTube API quota exhausted")
            if reason == "commentsDisabled":
                raise CommentsDisabled()
            if reason in ("videoNotFound", "channelNotFound") or resp.status_code == 404:
                raise ChannelNotFoundError(f"resource not found: {reason}")
            if resp.status_code in (403, 429, 500, 503) and attempt < self.max_retries:
                time.sleep(delay)
                delay = min(delay * 2, 60.0)
                continue
            resp.raise_for_status()
        raise QuotaExhaustedError("retries exhausted against the YouTube API")


def _error_reason(resp) -> str:
    try:
        return resp.json()["error"]["errors"][0]["reason"]
    except Exception:
        return ""


class CommentsDisabled(Exception):
    """Control-flow marker: the video has comments turned off."""


class YouTubeClient:
    """Thin typed wrapper over the API endpoints the ingester needs."""

    def __init__(self, transport: Transport, cfg: IngestConfig | None = None):
        self.transport = transport
        self.cfg = cfg or IngestConfig()
        self.pages_consumed = 0
        self._count_lock = threading.Lock()

    def _get(self, endpoint: str, params: dict) -> dict:
        with self._count_lock:
            self.pages_consumed += 1
        return self.transport.get(endpoint, params)

    def channel_info(self, channel_id: str) -> tuple[str, str]:
        """(display_name, uploads_playlist_id)"""
        body = self._get("channels", {
            "part": "snippet,contentDetails", "id": channel_id})
        items = body.get("items", [])
        if not items:
            raise ChannelNotFoundError(f"channel {channel_id!r} not found")
        item = items[0]
        uploads = item["contentDetails"]["relatedPlaylists"]["uploads"]
        return item["snippet"]["title"], uploads

    def playlist_page(self, playlist_id: str, page_token: str | None):
        params = {"part": "contentDetails", "playlistId": playlist_id,
                  "maxResults": self.cfg.page_size}
        if page_token:
            params["pageToken"] = page_token
        body = self._get("playlistItems", params)
        ids = [i["contentDetails"]["videoId"] for i in body.get("items", [])]
        return ids, body.get("nextPageToken")

    def video_details(self, channel_id: str, video_ids: list[str]) -> list[VideoRecord]:
        if not video_ids:
            return []
        body = self._get("videos", {
            "part": "snippet,statistics", "id": ",".join(video_ids),
            "maxResults": len(video_ids)})
        now = utcnow()
        records = []
        for item in body.get("items", []):
            stats = item.get("statistics", {})
            records.append(VideoRecord(
                video_id=item["id"], channel_id=channel_id,
                title=item["snippet"]["title"],
                published_at=parse_iso(item["snippet"]["publishedAt"]),
                view_count=int(stats.get("viewCount", 0)),
                like_count=int(stats.get("likeCount", 0)),
                comment_count_reported=int(stats.get("commentCount", 0)),
                fetched_at=now))
        return records

    def comment_threads_page(self, video_id: str, page_token: str | None):
        params = {"part": "snippet,replies", "videoId": video_id,
                  "maxResults": self.cfg.comment_page_size,
                  "order": "time", "textFormat": "plainText"}
        if page_token:
            params["pageToken"] = page_token
        body = self._get("commentThreads", params)
        return body.get("items", []), body.get("nextPageToken")

    def replies(self, parent_id: str) -> list[dict]:
        items: list[dict] = []
        token = None
        while True:
            params = {"part": "snippet", "parentId": parent_id,
                      "maxResults": self.cfg.comment_page_size,
                      "textFormat": "plainText"}
            if token:
                params["pageToken"] = token
            body = self._get("comments", params)
            items.extend(body.get("items", []))
            token = body.get("nextPageToken")
            if not token:
                return items


def _comment_from_api(item: dict, video_id: str,
                      parent_id: str | None) -> CommentRecord:
    sn = item["snippet"]
    return CommentRecord(
        comment_id=item["id"], video_id=video_id, parent_id=parent_id,
        author_id=sn.get("authorChannelId", {}).get("value", ""),
        author_display=sn.get("authorDisplayName", ""),
        text=sn.get("textOriginal", sn.get("textDisplay", "")),
        published_at=parse_iso(sn["publishedAt"]),
        like_count=int(sn.get("likeCount", 0)))


def _thread_to_comments(item: dict, video_id: str,
                        client: YouTubeClient) -> list[CommentRecord]:
    top = item["snippet"]["topLevelComment"]
    records = [_comment_from_api(top, video_id, None)]
    total_replies = int(item["snippet"].get("totalReplyCount", 0))
    inline = item.get("replies", {}).get("comments", [])
    if total_replies > len(inline):
        inline = client.replies(top["id"])
    for reply in inline:
        records.append(_comment_from_api(reply, video_id, top["id"]))
    return records


def _clean(records: Iterable[CommentRecord]) -> list[CommentRecord]:
    """Blank-text comments are dropped at ingestion."""
    return [r for r in records if r.text.strip()]


# ---- public operations ----------------------------------------------------

def fetch_channel_videos(store: Store, client: YouTubeClient,
                         channel: ChannelRef) -> list[VideoRecord]:
    """All public videos of the channel, persisted via upsert."""
    display_name, uploads = client.channel_info(channel.channel_id)
    store.upsert_channel(ChannelRef(channel.channel_id, display_name))
    records: list[VideoRecord] = []
    token = None
    while True:
        ids, token = client.playlist_page(uploads, token)
        page_records = client.video_details(channel.channel_id, ids)
        store.upsert_videos(page_records)
        records.extend(page_records)
        if not token:
            return records


def fetch_video_comments(store: Store, client: YouTubeClient,
                         video_id: str) -> list[CommentRecord]:
    """All comment threads and replies for one video; a video with comments
    disabled yields an empty list, not an error."""
    records: list[CommentRecord] = []
    token = None
    while True:
        try:
            items, token = client.comment_threads_page(video_id, token)
        except CommentsDisabled:
            return records
        page_records = _clean(
            r for item in items for r in _thread_to_comments(item, video_id, client))
        store.upsert_comments(page_records)
        records.extend(page_records)
        if not token:
            return records


def ingest_channel(store: Store, client: YouTubeClient,
                   channel_id: str) -> FetchManifest:
    """Full channel ingest (videos, then comments per video), resumable."""
    with store.ingest_lock(channel_id):
        return _run_ingest(store, client, channel_id, full=True)


def incremental_sync(store: Store, client: YouTubeClient, channel_id: str,
                     overlap_hours: int | None = None) -> FetchManifest:
    """Fetch only content newer than the channel's last_fetch_at, plus
    refreshed counters for known videos; first-ever sync is a full fetch."""
    channel = store.get_channel(channel_id)
    if channel is None or channel.last_fetch_at is None:
        return ingest_channel(store, client, channel_id)
    cutoff = channel.last_fetch_at.timestamp()
    if overlap_hours is None:
        overlap_hours = client.cfg.sync_overlap_hours
    cutoff -= overlap_hours * 3600
    with store.ingest_lock(channel_id):
        return _run_ingest(store, client, channel_id, full=False, cutoff=cutoff)


def _run_ingest(store: Store, client: YouTubeClient, channel_id: str,
                full: bool, cutoff: float | None = None) -> FetchManifest:
    manifest = FetchManifest(channel_id=channel_id, started_at=utcnow())
    run_id = store.start_fetch_run(channel_id)
    pages_at_start = client.pages_consumed
    cursor = _load_cursor(store, channel_id) if full else None
    try:
        if cursor is None or cursor.get("phase") == "videos":
            token = (cursor or {}).get("page_token")
            uploads = (cursor or {}).get("uploads")
            if uploads is None:
                display_name, uploads = client.channel_info(channel_id)
                store.upsert_channel(ChannelRef(channel_id, display_name))
            pending = list((cursor or {}).get("pending", []))
            while True:
                try:
                    ids, next_token = client.playlist_page(uploads, token)
                except QuotaExhaustedError:
                    _save_cursor(store, run_id, manifest, {
                        "phase": "videos", "page_token": token, "uploads": uploads,
                        "pending": pending})
                    manifest.pages_consumed = client.pages_consumed - pages_at_start
                    raise
                records = client.video_details(channel_id, ids)
                manifest.videos_fetched += store.upsert_videos(records)
                pending.extend(r.video_id for r in records)
                token = next_token
                if not token:
                    break
            cursor = {"phase": "comments", "pending": pending,
                      "video_id": None, "page_token": None}
        pending = list(cursor.get("pending", []))
        current = cursor.get("video_id")
        token = cursor.get("page_token")
        if current is not None:
            pending.insert(0, current)
        concurrency = client.cfg.concurrency
        if concurrency > 1 and cutoff is None and token is None:
            _fetch_comments_concurrent(store, client, run_id, manifest,
                                       pending, concurrency, pages_at_start)
        else:
            _fetch_comments_sequential(store, client, run_id, manifest,
                                       pending, token, cutoff, pages_at_start)
        manifest.finished_at = utcnow()
        manifest.pages_consumed = client.pages_consumed - pages_at_start
        store.set_last_fetch(channel_id, manifest.finished_at)
        store.finish_fetch_run(run_id, manifest)
        return manifest
    except CredentialError:
        manifest.pages_consumed = client.pages_consumed - pages_at_start
        store.finish_fetch_run(run_id, manifest)
        raise


def _fetch_comments_sequential(store: Store, client: YouTubeClient, run_id: int,
                               manifest: FetchManifest, pending: list[str],
                               token: str | None, cutoff: float | None,
                               pages_at_start: int) -> None:
    while pending:
        video_id = pending[0]
        stop = False
        while True:
            try:
                items, next_token = client.comment_threads_page(video_id, token)
            except CommentsDisabled:
                break
            except QuotaExhaustedError:
                _save_cursor(store, run_id, manifest, {
                    "phase": "comments", "pending": pending[1:],
                    "video_id": video_id, "page_token": token})
                manifest.pages_consumed = client.pages_consumed - pages_at_start
                raise
            records = _clean(
                r for item in items
                for r in _thread_to_comments(item, video_id, client))
            manifest.comments_fetched += store.upsert_comments(records)
            if cutoff is not None and items:
                newest_first = [parse_iso(
                    i["snippet"]["topLevelComment"]["snippet"]["publishedAt"]).timestamp()
                    for i in items]
                if max(newest_first) < cutoff:
                    stop = True  # the rest of the pages are older still
            token = next_token
            if not token or stop:
                break
        pending.pop(0)
        token = None


def _fetch_comments_concurrent(store: Store, client: YouTubeClient, run_id: int,
                               manifest: FetchManifest, pending: list[str],
                               concurrency: int, pages_at_start: int) -> None:
    """Fetch whole videos in parallel waves; upserts stay on this thread.

    A worker returns a video's complete comment list, so a video either
    lands atomically or (on quota exhaustion) is retried from scratch by the
    resumed run; upserts make the retry idempotent.
    """

    def fetch_all(video_id: str) -> list[CommentRecord]:
        records: list[CommentRecord] = []
        token = None
        while True:
            try:
                items, token = client.comment_threads_page(video_id, token)
            except CommentsDisabled:
                return records
            records.extend(
                r for item in items
                for r in _thread_to_comments(item, video_id, client))
            if not token:
                return records

    with ThreadPoolExecutor(max_workers=concurrency) as pool:
        while pending:
            wave = pending[:concurrency]
            futures = [(vid, pool.submit(fetch_all, vid)) for vid in wave]
            failed: list[str] = []
            quota: QuotaExhaustedError | None = None
            for vid, future in futures:
                try:
                    records = future.result()
                except QuotaExhaustedError as exc:
                    quota = exc
                    failed.append(vid)
                    continue
                manifest.comments_fetched += store.upsert_comments(_clean(records))
            if quota is not None:
                _save_cursor(store, run_id, manifest, {
                    "phase": "comments",
                    "pending": failed + pending[len(wave):],
                    "video_id": None, "page_token": None})
                manifest.pages_consumed = client.pages_consumed - pages_at_start
                raise quota
            pending = pending[len(wave):]


def _load_cursor(store: Store, channel_id: str) -> dict | None:
    raw = store.latest_resume_cursor(channel_id)
    return json.loads(raw) if raw else None


def _save_cursor(store: Store, run_id: int, manifest: FetchManifest,
                 cursor: dict) -> None:
    manifest.resume_cursor = json.dumps(cursor)
    manifest.finished_at = utcnow()
    store.finish_fetch_run(run_id, manifest)


# ---- fixture bundles --------------------------------------------------------

def ingest_fixture(store: Store, path: str) -> FetchManifest:
    """Load a fixture bundle directory: channel.json, videos.json, comments.json.

    Validation failures name the offending record. Blank-text comments are
    dropped (not an error). The channel's last_fetch_at is set to the newest
    authored fetched_at so downstream output is reproducible.
    """
    manifest = FetchManifest(channel_id="", started_at=utcnow())

    def read(name: str):
        file_path = os.path.join(path, name)
        if not os.path.exists(file_path):
            raise MalformedBundleError(f"bundle is missing {name}")
        with open(file_path, encoding="utf-8") as fh:
            try:
                return json.load(fh)
            except json.JSONDecodeError as exc:
                raise MalformedBundleError(f"{name}: invalid JSON: {exc}") from exc

    channel_raw = read("channel.json")
    if not isinstance(channel_raw, dict) or not channel_raw.get("channel_id"):
        raise MalformedBundleError("channel.json: missing channel_id")
    channel_id = str(channel_raw["channel_id"])
    manifest.channel_id = channel_id

    videos_raw = read("videos.json")
    if not isinstance(videos_raw, list):
        raise MalformedBundleError("videos.json: expected an array")
    videos = []
    seen_video_ids = set()
    for i, raw in enumerate(videos_raw):
        rec = VideoRecord.from_dict({**raw, "channel_id": raw.get("channel_id", channel_id)},
                                    where=f"videos[{i}]")
        if rec.video_id in seen_video_ids:
            raise MalformedBundleError(f"videos[{i}]: duplicate video_id {rec.video_id!r}")
        seen_video_ids.add(rec.video_id)
        videos.append(rec)

    comments_raw = read("comments.json")
    if not isinstance(comments_raw, list):
        raise MalformedBundleError("comments.json: expected an array")
    comments = []
    for i, raw in enumerate(comments_raw):
        rec = CommentRecord.from_dict(raw, where=f"comments[{i}]")
        if rec.video_id not in seen_video_ids:
            raise MalformedBundleError(
                f"comments[{i}]: unknown video_id {rec.video_id!r}")
        if not rec.text.strip():
            continue
        comments.append(rec)

    store.upsert_channel(ChannelRef(channel_id,
                                    str(channel_raw.get("display_name", ""))))
    manifest.videos_fetched = store.upsert_videos(videos)
    manifest.comments_fetched = store.upsert_comments(comments)
    manifest.finished_at = utcnow()
    if videos:
        store.set_last_fetch(channel_id, max(v.fetched_at for v in videos))
    return manifest
