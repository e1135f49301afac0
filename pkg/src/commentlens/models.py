"""Domain types: raw records, sentiment, topics, themes, alerts, snapshots."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime

from .errors import MalformedBundleError
from .utils import parse_iso, to_iso

# scope_id used for channel-level artifacts (videos use their video_id)
CHANNEL_SCOPE = "channel"

ARTIFACT_KINDS = (
    "sentiment",
    "topics",
    "themes_video",
    "themes_channel",
    "suggestions_video",
    "suggestions_channel",
    "alerts",
    "stats",
    "wordcloud",
    "superfans",
)


@dataclass(frozen=True)
class ChannelRef:
    channel_id: str
    display_name: str = ""
    last_fetch_at: datetime | None = None


@dataclass(frozen=True)
class VideoRecord:
    video_id: str
    channel_id: str
    title: str
    published_at: datetime
    view_count: int
    like_count: int
    comment_count_reported: int
    fetched_at: datetime

    def to_dict(self) -> dict:
        return {
            "video_id": self.video_id,
            "channel_id": self.channel_id,
            "title": self.title,
            "published_at": to_iso(self.published_at),
            "view_count": self.view_count,
            "like_count": self.like_count,
            "comment_count_reported": self.comment_count_reported,
            "fetched_at": to_iso(self.fetched_at),
        }

    @classmethod
    def from_dict(cls, raw: dict, where: str = "video") -> "VideoRecord":
        try:
            rec = cls(
                video_id=str(raw["video_id"]),
                channel_id=str(raw.get("channel_id", "")),
                title=str(raw["title"]),
                published_at=parse_iso(raw["published_at"]),
                view_count=int(raw.get("view_count", 0)),
                like_count=int(raw.get("like_count", 0)),
                comment_count_reported=int(raw.get("comment_count_reported", 0)),
                fetched_at=parse_iso(raw["fetched_at"]),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise MalformedBundleError(f"{where}: {exc!r}") from exc
        if not rec.video_id:
            raise MalformedBundleError(f"{where}: empty video_id")
        if min(rec.view_count, rec.like_count, rec.comment_count_reported) < 0:
            raise MalformedBundleError(f"{where}: negative counter")
        return rec


@dataclass(frozen=True)
class CommentRecord:
    comment_id: str
    video_id: str
    author_id: str
    author_display: str
    text: str
    published_at: datetime
    like_count: int
    parent_id: str | None = None

    @property
    def is_reply(self) -> bool:
        return self.parent_id is not None

    def to_dict(self) -> dict:
        return {
            "comment_id": self.comment_id,
            "video_id": self.video_id,
            "parent_id": self.parent_id,
            "author_id": self.author_id,
            "author_display": self.author_display,
            "text": self.text,
            "published_at": to_iso(self.published_at),
            "like_count": self.like_count,
        }

    @classmethod
    def from_dict(cls, raw: dict, where: str = "comment") -> "CommentRecord":
        try:
            rec = cls(
                comment_id=str(raw["comment_id"]),
                video_id=str(raw["video_id"]),
                parent_id=raw.get("parent_id") or None,
                author_id=str(raw.get("author_id", "")),
                author_display=str(raw.get("author_display", "")),
                text=str(raw["text"]),
                published_at=parse_iso(raw["published_at"]),
                like_count=int(raw.get("like_count", 0)),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise MalformedBundleError(f"{where}: {exc!r}") from exc
        if not rec.comment_id:
            raise MalformedBundleError(f"{where}: empty comment_id")
        if rec.like_count < 0:
            raise MalformedBundleError(f"{where}: negative like_count")
        return rec


@dataclass
class FetchManifest:
    """Counters for one ingest run.

    videos_fetched / comments_fetched count records added or modified in the
    datastore, so re-running against an unchanged source reports zeros.
    """

    channel_id: str
    videos_fetched: int = 0
    comments_fetched: int = 0
    pages_consumed: int = 0
    started_at: datetime | None = None
    finished_at: datetime | None = None
    resume_cursor: str | None = None


@dataclass(frozen=True)
class SentimentTriple:
    p_neg: float
    p_neu: float
    p_pos: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.p_neg, self.p_neu, self.p_pos)


@dataclass(frozen=True)
class ScoredComment:
    comment_id: str
    triple: SentimentTriple
    scalar: float
    model_id: str


@dataclass(frozen=True)
class ClusterAssignment:
    comment_id: str
    cluster_id: int  # -1 = noise
    membership_strength: float


@dataclass
class TopicCluster:
    cluster_id: int
    label: str
    member_count: int
    share_pct: float
    sentiment_mean: float
    sentiment_variance: float
    sentiment_stddev: float
    exemplar_comment_ids: list[str]
    member_comment_ids: list[str]
    degraded: bool = False

    def to_row(self) -> dict:
        """Table row without the (potentially large) member id list."""
        return {
            "cluster_id": self.cluster_id,
            "label": self.label,
            "member_count": self.member_count,
            "share_pct": self.share_pct,
            "sentiment_mean": self.sentiment_mean,
            "sentiment_variance": self.sentiment_variance,
            "sentiment_stddev": self.sentiment_stddev,
            "exemplar_comment_ids": list(self.exemplar_comment_ids),
            "degraded": self.degraded,
        }


@dataclass(frozen=True)
class CommentSample:
    scope: str
    comment_ids: tuple[str, ...]
    sample_size_requested: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "scope": self.scope,
            "comment_ids": list(self.comment_ids),
            "sample_size_requested": self.sample_size_requested,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class CitationMatch:
    excerpt: str
    matched_comment_id: str | None
    similarity: float
    status: str  # exact | fuzzy | unmatched
    # resolved comment content, carried so tooltips need no extra lookup
    matched_text: str | None = None
    matched_author: str | None = None

    def to_dict(self) -> dict:
        return {
            "excerpt": self.excerpt,
            "matched_comment_id": self.matched_comment_id,
            "similarity": self.similarity,
            "status": self.status,
            "matched_text": self.matched_text,
            "matched_author": self.matched_author,
        }


@dataclass
class Theme:
    title: str
    description: str
    citations: list[CitationMatch]

    @property
    def unmatched_count(self) -> int:
        return sum(1 for c in self.citations if c.status == "unmatched")

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "description": self.description,
            "citations": [c.to_dict() for c in self.citations],
            "unmatched_count": self.unmatched_count,
        }


@dataclass
class ThemeReport:
    scope: str
    kind: str  # themes | suggestions
    items: list[Theme]
    sample: CommentSample
    model_id: str
    prompt_digest: str
    generated_at: datetime

    def to_dict(self) -> dict:
        return {
            "scope": self.scope,
            "kind": self.kind,
            "items": [t.to_dict() for t in self.items],
            "sample": self.sample.to_dict(),
            "model_id": self.model_id,
            "prompt_digest": self.prompt_digest,
            "generated_at": to_iso(self.generated_at),
        }


ALERT_KINDS = ("volume_high", "volume_low", "sentiment_positive",
               "sentiment_negative", "update_requests")


@dataclass
class Alert:
    kind: str
    video_id: str
    window_start: datetime | None
    observed: float
    baseline: float
    deviation: float
    supporting_comment_ids: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "video_id": self.video_id,
            "window_start": to_iso(self.window_start) if self.window_start else None,
            "observed": self.observed,
            "baseline": self.baseline,
            "deviation": self.deviation,
            "supporting_comment_ids": list(self.supporting_comment_ids),
        }


@dataclass
class VideoStats:
    video_id: str
    comment_count: int
    view_count: int
    like_count: int
    mean_sentiment: float | None
    first_comment_at: datetime | None
    last_comment_at: datetime | None

    def to_dict(self) -> dict:
        return {
            "video_id": self.video_id,
            "comment_count": self.comment_count,
            "view_count": self.view_count,
            "like_count": self.like_count,
            "mean_sentiment": self.mean_sentiment,
            "first_comment_at": to_iso(self.first_comment_at) if self.first_comment_at else None,
            "last_comment_at": to_iso(self.last_comment_at) if self.last_comment_at else None,
        }


@dataclass
class ChannelStats:
    channel_id: str
    display_name: str
    video_count: int
    total_views: int
    total_comments: int
    mean_sentiment: float | None
    last_collected_at: datetime | None

    def to_dict(self) -> dict:
        return {
            "channel_id": self.channel_id,
            "display_name": self.display_name,
            "video_count": self.video_count,
            "total_views": self.total_views,
            "total_comments": self.total_comments,
            "mean_sentiment": self.mean_sentiment,
            "last_collected_at": to_iso(self.last_collected_at) if self.last_collected_at else None,
        }


@dataclass(frozen=True)
class TermEntry:
    term: str
    frequency: int
    mean_sentiment: float

    def to_dict(self) -> dict:
        return {"term": self.term, "frequency": self.frequency,
                "mean_sentiment": self.mean_sentiment}


@dataclass(frozen=True)
class SuperfanEntry:
    author_id: str
    author_display: str
    comment_count: int
    mean_sentiment: float

    def to_dict(self) -> dict:
        return {"author_id": self.author_id, "author_display": self.author_display,
                "comment_count": self.comment_count, "mean_sentiment": self.mean_sentiment}


@dataclass(frozen=True)
class ArtifactKey:
    kind: str
    scope_id: str
    config_digest: str

    def __post_init__(self):
        if self.kind not in ARTIFACT_KINDS:
            raise ValueError(f"unknown artifact kind {self.kind!r}")

    @property
    def index_key(self) -> str:
        return f"{self.kind}:{self.scope_id}"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "scope_id": self.scope_id,
                "config_digest": self.config_digest}


@dataclass
class CorpusSnapshot:
    snapshot_id: int
    created_at: datetime
    video_count: int
    comment_count: int
    artifact_index: dict[str, ArtifactKey]
    comment_hwm: int
    degraded: list[dict]

    def key_for(self, kind: str, scope_id: str) -> ArtifactKey | None:
        return self.artifact_index.get(f"{kind}:{scope_id}")
