"""Non-LLM dashboard feeders: summary stats, time histograms, word-cloud
terms, superfan ranking, and video sorting. All pure reads."""

from __future__ import annotations

from collections import Counter, defaultdict
from datetime import datetime

from .models import (CHANNEL_SCOPE, ChannelStats, SuperfanEntry, TermEntry,
                     VideoRecord, VideoStats)
from .store import Store
from .textutil import content_terms, default_stopwords
from .utils import bucket_start, next_bucket

SORT_KEYS = ("chronological", "alphabetical", "views", "likes", "comments")
BUCKETS = ("day", "week", "month")


def comment_time_histogram(store: Store, video_id: str, bucket: str = "week",
                           extend_to: datetime | None = None) -> list[tuple[datetime, int]]:
    """Contiguous buckets from the first to the last comment, zero-filled.

    extend_to widens the range past the last comment (used by alerting to
    carry the series up to the channel's data horizon).
    """
    if bucket not in BUCKETS:
        raise ValueError(f"unknown bucket {bucket!r}")
    counts: Counter = Counter()
    bounds = None
    for comment in store.iter_comments(video_id):
        start = bucket_start(comment.published_at, bucket)
        counts[start] += 1
        if bounds is None:
            bounds = [start, start]
        else:
            bounds[0] = min(bounds[0], start)
            bounds[1] = max(bounds[1], start)
    if bounds is None:
        return []
    if extend_to is not None:
        bounds[1] = max(bounds[1], bucket_start(extend_to, bucket))
    out = []
    cur = bounds[0]
    while cur <= bounds[1]:
        out.append((cur, counts.get(cur, 0)))
        cur = next_bucket(cur, bucket)
    return out


def wordcloud_terms(store: Store, scope: str, k: int = 100,
                    stopwords: frozenset[str] | None = None) -> list[TermEntry]:
    """Top-k terms by total occurrence count; ties broken lexicographically.

    A term's mean_sentiment averages the scalar of each comment containing
    it (once per comment, however often the term repeats inside).
    """
    stopwords = stopwords if stopwords is not None else default_stopwords()
    video_id = None if scope == CHANNEL_SCOPE else scope
    freq: Counter = Counter()
    sent_sum: dict[str, float] = defaultdict(float)
    sent_n: dict[str, int] = defaultdict(int)
    ids = store.video_ids() if video_id is None else [video_id]
    for vid in ids:
        scalars = dict((cid, s) for cid, _, s in store.scalars_for_video(vid))
        for comment in store.iter_comments(vid):
            terms = content_terms(comment.text, stopwords)
            freq.update(terms)
            scalar = scalars.get(comment.comment_id)
            if scalar is not None:
                for term in set(terms):
                    sent_sum[term] += scalar
                    sent_n[term] += 1
    ranked = sorted(freq.items(), key=lambda kv: (-kv[1], kv[0]))[:k]
    return [TermEntry(term=t, frequency=n,
                      mean_sentiment=(sent_sum[t] / sent_n[t]) if sent_n[t] else 0.0)
            for t, n in ranked]


def superfans(store: Store, min_comments: int = 200, top_n: int = 20,
              include_replies: bool = True) -> list[SuperfanEntry]:
    """Authors with at least min_comments, ranked by mean sentiment descending;
    ties by comment count descending, then author_id."""
    count: Counter = Counter()
    total: dict[str, float] = defaultdict(float)
    display: dict[str, tuple[float, str]] = {}
    for vid in store.video_ids():
        scalars = dict((cid, s) for cid, _, s in store.scalars_for_video(vid))
        for comment in store.iter_comments(vid):
            if not include_replies and comment.is_reply:
                continue
            scalar = scalars.get(comment.comment_id)
            if scalar is None:
                continue
            aid = comment.author_id
            count[aid] += 1
            total[aid] += scalar
            ts = comment.published_at.timestamp()
            if aid not in display or ts >= display[aid][0]:
                display[aid] = (ts, comment.author_display)
    entries = [
        SuperfanEntry(author_id=aid, author_display=display[aid][1],
                      comment_count=n, mean_sentiment=total[aid] / n)
        for aid, n in count.items() if n >= min_comments]
    entries.sort(key=lambda e: (-e.mean_sentiment, -e.comment_count, e.author_id))
    return entries[:top_n]


def sort_videos(videos: list[VideoRecord], key: str = "chronological",
                direction: str = "desc") -> list[VideoRecord]:
    """Stable total order; ties broken by video_id so output is deterministic."""
    if key not in SORT_KEYS:
        raise ValueError(f"unknown sort key {key!r}")
    if direction not in ("asc", "desc"):
        raise ValueError(f"unknown direction {direction!r}")
    reverse = direction == "desc"

    def primary(v: VideoRecord):
        if key == "chronological":
            return v.published_at.timestamp()
        if key == "alphabetical":
            return v.title.casefold()
        if key == "views":
            return v.view_count
        if key == "likes":
            return v.like_count
        return v.comment_count_reported

    ordered = sorted(videos, key=lambda v: v.video_id)
    return sorted(ordered, key=primary, reverse=reverse)


def video_summary(store: Store, video_id: str,
                  max_rowid: int | None = None) -> VideoStats:
    video = store.get_video(video_id)
    n = store.count_comments(video_id, max_rowid=max_rowid)
    bounds = store.comment_time_bounds(video_id)
    scalars = store.scalars_for_video(video_id, max_rowid)
    mean = sum(s for _, _, s in scalars) / len(scalars) if scalars else None
    return VideoStats(
        video_id=video_id, comment_count=n, view_count=video.view_count,
        like_count=video.like_count, mean_sentiment=mean,
        first_comment_at=bounds[0] if bounds else None,
        last_comment_at=bounds[1] if bounds else None)


def channel_summary(store: Store, max_rowid: int | None = None) -> ChannelStats:
    channel = store.get_channel()
    videos = store.list_videos()
    total_views = sum(v.view_count for v in videos)
    total_comments = store.count_comments(max_rowid=max_rowid)
    total = 0.0
    n = 0
    for vid in (v.video_id for v in videos):
        for _, _, scalar in store.scalars_for_video(vid, max_rowid):
            total += scalar
            n += 1
    last_collected = max((v.fetched_at for v in videos), default=None)
    return ChannelStats(
        channel_id=channel.channel_id if channel else "",
        display_name=channel.display_name if channel else "",
        video_count=len(videos), total_views=total_views,
        total_comments=total_comments,
        mean_sentiment=(total / n) if n else None,
        last_collected_at=last_collected)
