"""Time handling and canonical JSON helpers.

All timestamps are UTC. Artifact blobs are serialized as canonical JSON
(sorted keys, no whitespace) so digests and golden comparisons are
byte-stable.
"""

from __future__ import annotations

import hashlib
import json
from datetime import datetime, timedelta, timezone

UTC = timezone.utc


def utcnow() -> datetime:
    return datetime.now(tz=UTC)


def parse_iso(value: str) -> datetime:
    """Parse an ISO-8601 timestamp, accepting both 'Z' and explicit offsets."""
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=UTC)
    return dt.astimezone(UTC)


def to_iso(dt: datetime) -> str:
    dt = dt.astimezone(UTC)
    if dt.microsecond:
        return dt.isoformat().replace("+00:00", "Z")
    return dt.strftime("%Y-%m-%dT%H:%M:%SZ")


def epoch(dt: datetime) -> float:
    return dt.astimezone(UTC).timestamp()


def from_epoch(ts: float) -> datetime:
    return datetime.fromtimestamp(ts, tz=UTC)


def day_start(dt: datetime) -> datetime:
    return dt.astimezone(UTC).replace(hour=0, minute=0, second=0, microsecond=0)


def week_start(dt: datetime) -> datetime:
    d = day_start(dt)
    return d - timedelta(days=d.weekday())  # weeks start Monday UTC


def month_start(dt: datetime) -> datetime:
    return dt.astimezone(UTC).replace(day=1, hour=0, minute=0, second=0, microsecond=0)


def bucket_start(dt: datetime, bucket: str) -> datetime:
    if bucket == "day":
        return day_start(dt)
    if bucket == "week":
        return week_start(dt)
    if bucket == "month":
        return month_start(dt)
    raise ValueError(f"unknown bucket {bucket!r}")


def next_bucket(start: datetime, bucket: str) -> datetime:
    if bucket == "day":
        return start + timedelta(days=1)
    if bucket == "week":
        return start + timedelta(days=7)
    if bucket == "month":
        if start.month == 12:
            return start.replace(year=start.year + 1, month=1)
        return start.replace(month=start.month + 1)
    raise ValueError(f"unknown bucket {bucket!r}")


def month_key(dt: datetime) -> str:
    dt = dt.astimezone(UTC)
    return f"{dt.year:04d}-{dt.month:02d}"


def canonical_json(obj) -> str:
    """Deterministic JSON text: sorted keys, compact separators, UTF-8 kept."""
    return json.dumps(obj, sort_keys=True, ensure_ascii=False,
                      separators=(",", ":"), allow_nan=False)


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def digest_params(params: dict) -> str:
    """Stable digest of a parameter dict; any value change changes the digest."""
    return sha256_text(canonical_json(params))
