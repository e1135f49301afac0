"""SQLite-backed datastore for raw records and computed artifacts.

Single-file embedded store, single writer (the CLI/pipeline) with many
concurrent readers (the service). Published snapshots are immutable: each
snapshot records its artifact index and a comment high-water mark, so a
reader pinned to a snapshot never sees rows or artifacts written later.
"""

from __future__ import annotations

import json
import os
import sqlite3
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import datetime

from .errors import (IntegrityError, IngestLockedError, InvalidPageError,
                     PublishInProgressError, VideoNotFoundError)
from .models import (ArtifactKey, ChannelRef, CommentRecord, CorpusSnapshot,
                     FetchManifest, ScoredComment, VideoRecord)
from .utils import canonical_json, epoch, from_epoch, utcnow

_SCHEMA = """
CREATE TABLE IF NOT EXISTS channel (
    channel_id TEXT PRIMARY KEY,
    display_name TEXT NOT NULL DEFAULT '',
    last_fetch_at REAL
);
CREATE TABLE IF NOT EXISTS videos (
    video_id TEXT PRIMARY KEY,
    channel_id TEXT NOT NULL,
    title TEXT NOT NULL,
    published_at REAL NOT NULL,
    view_count INTEGER NOT NULL,
    like_count INTEGER NOT NULL,
    comment_count_reported INTEGER NOT NULL,
    fetched_at REAL NOT NULL
);
CREATE TABLE IF NOT EXISTS comments (
    comment_id TEXT PRIMARY KEY,
    video_id TEXT NOT NULL,
    parent_id TEXT,
    author_id TEXT NOT NULL,
    author_display TEXT NOT NULL,
    text TEXT NOT NULL,
    published_at REAL NOT NULL,
    like_count INTEGER NOT NULL
);
CREATE INDEX IF NOT EXISTS idx_comments_video ON comments(video_id, published_at, comment_id);
CREATE INDEX IF NOT EXISTS idx_comments_order ON comments(published_at, comment_id);
CREATE INDEX IF NOT EXISTS idx_comments_author ON comments(author_id);
CREATE TABLE IF NOT EXISTS comment_sentiment (
    comment_id TEXT PRIMARY KEY,
    p_neg REAL NOT NULL,
    p_neu REAL NOT NULL,
    p_pos REAL NOT NULL,
    scalar REAL NOT NULL,
    model_id TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS artifacts (
    kind TEXT NOT NULL,
    scope_id TEXT NOT NULL,
    config_digest TEXT NOT NULL,
    blob TEXT NOT NULL,
    created_at REAL NOT NULL,
    PRIMARY KEY (kind, scope_id, config_digest)
);
CREATE TABLE IF NOT EXISTS snapshots (
    snapshot_id INTEGER PRIMARY KEY AUTOINCREMENT,
    created_at REAL NOT NULL,
    video_count INTEGER NOT NULL,
    comment_count INTEGER NOT NULL,
    comment_hwm INTEGER NOT NULL,
    artifact_index TEXT NOT NULL,
    degraded TEXT NOT NULL DEFAULT '[]',
    is_current INTEGER NOT NULL DEFAULT 0
);
CREATE TABLE IF NOT EXISTS fetch_runs (
    run_id INTEGER PRIMARY KEY AUTOINCREMENT,
    channel_id TEXT NOT NULL,
    videos_fetched INTEGER NOT NULL DEFAULT 0,
    comments_fetched INTEGER NOT NULL DEFAULT 0,
    pages_consumed INTEGER NOT NULL DEFAULT 0,
    started_at REAL NOT NULL,
    finished_at REAL,
    resume_cursor TEXT
);
CREATE TABLE IF NOT EXISTS locks (
    name TEXT PRIMARY KEY,
    acquired_at REAL NOT NULL,
    owner TEXT NOT NULL
);
"""

_VIDEO_CONTENT_FIELDS = ("channel_id", "title", "published_at", "view_count",
                         "like_count", "comment_count_reported")
_COMMENT_FIELDS = ("video_id", "parent_id", "author_id", "author_display",
                   "text", "published_at", "like_count")


@dataclass(frozen=True)
class CommentFilter:
    video_id: str | None = None
    author_id: str | None = None
    time_range: tuple[datetime | None, datetime | None] | None = None
    text_substring: str | None = None
    comment_ids: tuple[str, ...] | None = None


@dataclass
class CommentPage:
    total: int
    page: int
    page_size: int
    items: list[CommentRecord]


def _row_to_video(row) -> VideoRecord:
    return VideoRecord(
        video_id=row["video_id"], channel_id=row["channel_id"], title=row["title"],
        published_at=from_epoch(row["published_at"]), view_count=row["view_count"],
        like_count=row["like_count"],
        comment_count_reported=row["comment_count_reported"],
        fetched_at=from_epoch(row["fetched_at"]))


def _row_to_comment(row) -> CommentRecord:
    return CommentRecord(
        comment_id=row["comment_id"], video_id=row["video_id"],
        parent_id=row["parent_id"], author_id=row["author_id"],
        author_display=row["author_display"], text=row["text"],
        published_at=from_epoch(row["published_at"]), like_count=row["like_count"])


class Store:
    def __init__(self, path: str, read_only: bool = False):
        self.path = path
        self.read_only = read_only
        if read_only:
            uri = f"file:{path}?mode=ro"
            self._conn = sqlite3.connect(uri, uri=True, check_same_thread=False)
        else:
            directory = os.path.dirname(os.path.abspath(path))
            os.makedirs(directory, exist_ok=True)
            self._conn = sqlite3.connect(path, check_same_thread=False)
        self._conn.row_factory = sqlite3.Row
        self._write_lock = threading.Lock()
        if not read_only:
            self._conn.execute("PRAGMA journal_mode=WAL")
            self._conn.execute("PRAGMA synchronous=NORMAL")
            self._conn.executescript(_SCHEMA)
            self._conn.commit()

    def close(self) -> None:
        self._conn.close()

    @contextmanager
    def _txn(self):
        with self._write_lock:
            try:
                yield self._conn
                self._conn.commit()
            except BaseException:
                self._conn.rollback()
                raise

    # ---- channel ---------------------------------------------------------

    def upsert_channel(self, ref: ChannelRef) -> None:
        with self._txn() as conn:
            conn.execute(
                "INSERT INTO channel(channel_id, display_name, last_fetch_at) "
                "VALUES (?, ?, ?) ON CONFLICT(channel_id) DO UPDATE SET "
                "display_name=excluded.display_name",
                (ref.channel_id, ref.display_name,
                 epoch(ref.last_fetch_at) if ref.last_fetch_at else None))

    def get_channel(self, channel_id: str | None = None) -> ChannelRef | None:
        if channel_id is None:
            row = self._conn.execute("SELECT * FROM channel LIMIT 1").fetchone()
        else:
            row = self._conn.execute(
                "SELECT * FROM channel WHERE channel_id=?", (channel_id,)).fetchone()
        if row is None:
            return None
        last = from_epoch(row["last_fetch_at"]) if row["last_fetch_at"] else None
        return ChannelRef(row["channel_id"], row["display_name"], last)

    def set_last_fetch(self, channel_id: str, when: datetime) -> None:
        with self._txn() as conn:
            conn.execute("UPDATE channel SET last_fetch_at=? WHERE channel_id=?",
                         (epoch(when), channel_id))

    # ---- videos ----------------------------------------------------------

    def upsert_videos(self, records: list[VideoRecord]) -> int:
        """Insert-or-replace by video_id. Returns the number of rows whose
        content changed; fetched_at refreshes do not count as changes."""
        if not records:
            return 0
        changed = 0
        with self._txn() as conn:
            for rec in records:
                row = conn.execute("SELECT * FROM videos WHERE video_id=?",
                                   (rec.video_id,)).fetchone()
                new = (rec.channel_id, rec.title, epoch(rec.published_at),
                       rec.view_count, rec.like_count, rec.comment_count_reported)
                if row is None or tuple(row[f] for f in _VIDEO_CONTENT_FIELDS) != new:
                    changed += 1
                conn.execute(
                    "INSERT INTO videos(video_id, channel_id, title, published_at, "
                    "view_count, like_count, comment_count_reported, fetched_at) "
                    "VALUES (?,?,?,?,?,?,?,?) ON CONFLICT(video_id) DO UPDATE SET "
                    "channel_id=excluded.channel_id, title=excluded.title, "
                    "published_at=excluded.published_at, view_count=excluded.view_count, "
                    "like_count=excluded.like_count, "
                    "comment_count_reported=excluded.comment_count_reported, "
                    "fetched_at=excluded.fetched_at",
                    (rec.video_id, *new, epoch(rec.fetched_at)))
        return changed

    def get_video(self, video_id: str) -> VideoRecord:
        row = self._conn.execute("SELECT * FROM videos WHERE video_id=?",
                                 (video_id,)).fetchone()
        if row is None:
            raise VideoNotFoundError(f"unknown video {video_id!r}")
        return _row_to_video(row)

    def has_video(self, video_id: str) -> bool:
        return self._conn.execute("SELECT 1 FROM videos WHERE video_id=?",
                                  (video_id,)).fetchone() is not None

    def list_videos(self) -> list[VideoRecord]:
        rows = self._conn.execute(
            "SELECT * FROM videos ORDER BY published_at, video_id").fetchall()
        return [_row_to_video(r) for r in rows]

    def video_ids(self) -> list[str]:
        rows = self._conn.execute(
            "SELECT video_id FROM videos ORDER BY published_at, video_id").fetchall()
        return [r["video_id"] for r in rows]

    # ---- comments --------------------------------------------------------

    def upsert_comments(self, records: list[CommentRecord]) -> int:
        """Insert-or-replace by comment_id; the whole batch is atomic.

        Rejects the batch if any record references a video that is not in the
        store (referential integrity) or has blank text.
        """
        if not records:
            return 0
        changed = 0
        with self._txn() as conn:
            known = {r["video_id"] for r in
                     conn.execute("SELECT video_id FROM videos").fetchall()}
            for rec in records:
                if rec.video_id not in known:
                    raise IntegrityError(
                        f"comment {rec.comment_id!r} references unknown video "
                        f"{rec.video_id!r}; batch rejected")
                if not rec.text.strip():
                    raise IntegrityError(
                        f"comment {rec.comment_id!r} has blank text; batch rejected")
            for rec in records:
                row = conn.execute("SELECT * FROM comments WHERE comment_id=?",
                                   (rec.comment_id,)).fetchone()
                new = (rec.video_id, rec.parent_id, rec.author_id,
                       rec.author_display, rec.text, epoch(rec.published_at),
                       rec.like_count)
                if row is None or tuple(row[f] for f in _COMMENT_FIELDS) != new:
                    changed += 1
                conn.execute(
                    "INSERT INTO comments(comment_id, video_id, parent_id, author_id, "
                    "author_display, text, published_at, like_count) "
                    "VALUES (?,?,?,?,?,?,?,?) ON CONFLICT(comment_id) DO UPDATE SET "
                    "video_id=excluded.video_id, parent_id=excluded.parent_id, "
                    "author_id=excluded.author_id, author_display=excluded.author_display, "
                    "text=excluded.text, published_at=excluded.published_at, "
                    "like_count=excluded.like_count",
                    (rec.comment_id, *new))
        return changed

    def count_comments(self, video_id: str | None = None,
                       max_rowid: int | None = None) -> int:
        sql = "SELECT COUNT(*) FROM comments WHERE 1=1"
        args: list = []
        if video_id is not None:
            sql += " AND video_id=?"
            args.append(video_id)
        if max_rowid is not None:
            sql += " AND rowid<=?"
            args.append(max_rowid)
        return self._conn.execute(sql, args).fetchone()[0]

    def comment_hwm(self, video_id: str | None = None) -> int:
        if video_id is None:
            row = self._conn.execute("SELECT MAX(rowid) FROM comments").fetchone()
        else:
            row = self._conn.execute(
                "SELECT MAX(rowid) FROM comments WHERE video_id=?",
                (video_id,)).fetchone()
        return row[0] or 0

    def _filter_sql(self, flt: CommentFilter, max_rowid: int | None):
        clauses, args = [], []
        if flt.video_id is not None:
            clauses.append("video_id=?")
            args.append(flt.video_id)
        if flt.author_id is not None:
            clauses.append("author_id=?")
            args.append(flt.author_id)
        if flt.time_range is not None:
            start, end = flt.time_range
            if start is not None:
                clauses.append("published_at>=?")
                args.append(epoch(start))
            if end is not None:
                clauses.append("published_at<?")
                args.append(epoch(end))
        if flt.text_substring:
            # LIKE is ASCII case-insensitive and runs a fast C scan
            clauses.append("text LIKE ? ESCAPE '\\'")
            escaped = (flt.text_substring.replace("\\", "\\\\")
                       .replace("%", "\\%").replace("_", "\\_"))
            args.append(f"%{escaped}%")
        if flt.comment_ids is not None:
            placeholders = ",".join("?" for _ in flt.comment_ids)
            clauses.append(f"comment_id IN ({placeholders or 'NULL'})")
            args.extend(flt.comment_ids)
        if max_rowid is not None:
            clauses.append("rowid<=?")
            args.append(max_rowid)
        where = (" WHERE " + " AND ".join(clauses)) if clauses else ""
        return where, args

    def query_comments(self, flt: CommentFilter, page: int = 1,
                       page_size: int = 100,
                       max_rowid: int | None = None) -> CommentPage:
        """Deterministic order (published_at, comment_id); stable pagination."""
        if page < 1:
            raise InvalidPageError(f"page must be >= 1, got {page}")
        if not 1 <= page_size <= 500:
            raise InvalidPageError(f"page_size must be in [1, 500], got {page_size}")
        where, args = self._filter_sql(flt, max_rowid)
        limit_args = (*args, page_size, (page - 1) * page_size)
        if flt.text_substring:
            # substring filters force a scan; answer count and page in the
            # same pass with a window count instead of scanning twice
            rows = self._conn.execute(
                f"SELECT *, COUNT(*) OVER () AS _total FROM comments{where} "
                "ORDER BY published_at, comment_id LIMIT ? OFFSET ?",
                limit_args).fetchall()
            if rows:
                total = rows[0]["_total"]
            elif page > 1:  # overran the last page; count the matches alone
                total = self._conn.execute(
                    f"SELECT COUNT(*) FROM comments{where}", args).fetchone()[0]
            else:
                total = 0
        else:
            total = self._conn.execute(
                f"SELECT COUNT(*) FROM comments{where}", args).fetchone()[0]
            # resolve the page to rowids through a covering index first, so
            # deep OFFSETs skip index entries instead of materializing rows
            inner = (f"SELECT rowid AS rid FROM comments{where} "
                     "ORDER BY published_at, comment_id LIMIT ? OFFSET ?")
            rows = self._conn.execute(
                f"SELECT c.* FROM comments c JOIN ({inner}) p ON c.rowid = p.rid "
                "ORDER BY c.published_at, c.comment_id", limit_args).fetchall()
        return CommentPage(total=total, page=page, page_size=page_size,
                           items=[_row_to_comment(r) for r in rows])

    def iter_comments(self, video_id: str | None = None, batch_size: int = 2000):
        """Yield comments in deterministic (published_at, comment_id) order."""
        last_key: tuple[float, str] | None = None
        while True:
            clauses, args = [], []
            if video_id is not None:
                clauses.append("video_id=?")
                args.append(video_id)
            if last_key is not None:
                clauses.append("(published_at, comment_id) > (?, ?)")
                args.extend(last_key)
            where = (" WHERE " + " AND ".join(clauses)) if clauses else ""
            rows = self._conn.execute(
                f"SELECT * FROM comments{where} ORDER BY published_at, comment_id "
                "LIMIT ?", (*args, batch_size)).fetchall()
            if not rows:
                return
            for row in rows:
                yield _row_to_comment(row)
            last_key = (rows[-1]["published_at"], rows[-1]["comment_id"])

    def comments_by_ids(self, ids: list[str]) -> list[CommentRecord]:
        """Fetch by id, preserving the order of `ids`; missing ids are skipped."""
        out: dict[str, CommentRecord] = {}
        for i in range(0, len(ids), 400):
            chunk = ids[i:i + 400]
            placeholders = ",".join("?" for _ in chunk)
            rows = self._conn.execute(
                f"SELECT * FROM comments WHERE comment_id IN ({placeholders})",
                chunk).fetchall()
            for row in rows:
                out[row["comment_id"]] = _row_to_comment(row)
        return [out[i] for i in ids if i in out]

    def comment_time_bounds(self, video_id: str | None = None):
        sql = "SELECT MIN(published_at), MAX(published_at) FROM comments"
        args: list = []
        if video_id is not None:
            sql += " WHERE video_id=?"
            args.append(video_id)
        lo, hi = self._conn.execute(sql, args).fetchone()
        if lo is None:
            return None
        return from_epoch(lo), from_epoch(hi)

    # ---- sentiment scores --------------------------------------------------

    def put_sentiment(self, scored: list[ScoredComment]) -> None:
        with self._txn() as conn:
            conn.executemany(
                "INSERT INTO comment_sentiment(comment_id, p_neg, p_neu, p_pos, "
                "scalar, model_id) VALUES (?,?,?,?,?,?) "
                "ON CONFLICT(comment_id) DO UPDATE SET p_neg=excluded.p_neg, "
                "p_neu=excluded.p_neu, p_pos=excluded.p_pos, scalar=excluded.scalar, "
                "model_id=excluded.model_id",
                [(s.comment_id, s.triple.p_neg, s.triple.p_neu, s.triple.p_pos,
                  s.scalar, s.model_id) for s in scored])

    def sentiment_model(self) -> str | None:
        row = self._conn.execute(
            "SELECT model_id FROM comment_sentiment LIMIT 1").fetchone()
        return row["model_id"] if row else None

    def unscored_comment_count(self, model_id: str) -> int:
        return self._conn.execute(
            "SELECT COUNT(*) FROM comments c LEFT JOIN comment_sentiment s "
            "ON c.comment_id = s.comment_id AND s.model_id = ? "
            "WHERE s.comment_id IS NULL", (model_id,)).fetchone()[0]

    def iter_unscored_comments(self, model_id: str, batch_size: int = 2000):
        last_id = ""
        while True:
            rows = self._conn.execute(
                "SELECT c.* FROM comments c LEFT JOIN comment_sentiment s "
                "ON c.comment_id = s.comment_id AND s.model_id = ? "
                "WHERE s.comment_id IS NULL AND c.comment_id > ? "
                "ORDER BY c.comment_id LIMIT ?",
                (model_id, last_id, batch_size)).fetchall()
            if not rows:
                return
            for row in rows:
                yield _row_to_comment(row)
            last_id = rows[-1]["comment_id"]

    def scalars_for_video(self, video_id: str,
                          max_rowid: int | None = None) -> list[tuple[str, float, float]]:
        """(comment_id, published_at_epoch, scalar) for scored comments of a video."""
        sql = ("SELECT c.comment_id, c.published_at, s.scalar FROM comments c "
               "JOIN comment_sentiment s ON c.comment_id = s.comment_id "
               "WHERE c.video_id=?")
        args: list = [video_id]
        if max_rowid is not None:
            sql += " AND c.rowid<=?"
            args.append(max_rowid)
        sql += " ORDER BY c.published_at, c.comment_id"
        return [(r["comment_id"], r["published_at"], r["scalar"])
                for r in self._conn.execute(sql, args).fetchall()]

    def scalar_map(self, ids: list[str]) -> dict[str, float]:
        out: dict[str, float] = {}
        for i in range(0, len(ids), 400):
            chunk = ids[i:i + 400]
            placeholders = ",".join("?" for _ in chunk)
            rows = self._conn.execute(
                "SELECT comment_id, scalar FROM comment_sentiment "
                f"WHERE comment_id IN ({placeholders})", chunk).fetchall()
            out.update({r["comment_id"]: r["scalar"] for r in rows})
        return out

    # ---- artifacts ---------------------------------------------------------

    def put_artifact(self, key: ArtifactKey, obj) -> None:
        blob = canonical_json(obj)
        with self._txn() as conn:
            conn.execute(
                "INSERT INTO artifacts(kind, scope_id, config_digest, blob, created_at) "
                "VALUES (?,?,?,?,?) ON CONFLICT(kind, scope_id, config_digest) "
                "DO UPDATE SET blob=excluded.blob, created_at=excluded.created_at",
                (key.kind, key.scope_id, key.config_digest, blob, epoch(utcnow())))

    def get_artifact_text(self, key: ArtifactKey) -> str | None:
        row = self._conn.execute(
            "SELECT blob FROM artifacts WHERE kind=? AND scope_id=? AND config_digest=?",
            (key.kind, key.scope_id, key.config_digest)).fetchone()
        return row["blob"] if row else None

    def get_artifact(self, key: ArtifactKey):
        text = self.get_artifact_text(key)
        return None if text is None else json.loads(text)

    # ---- snapshots -----------------------------------------------------------

    def publish_snapshot(self, artifact_index: dict[str, ArtifactKey],
                         degraded: list[dict] | None = None) -> CorpusSnapshot:
        """Atomically create a new snapshot and mark it current."""
        with self.hold_lock("publish", error=PublishInProgressError(
                "another publish is in progress")):
            hwm = self.comment_hwm()
            video_count = self._conn.execute("SELECT COUNT(*) FROM videos").fetchone()[0]
            comment_count = self.count_comments(max_rowid=hwm)
            index_json = canonical_json(
                {k: key.to_dict() for k, key in artifact_index.items()})
            degraded = degraded or []
            now = utcnow()
            with self._txn() as conn:
                cur = conn.execute(
                    "INSERT INTO snapshots(created_at, video_count, comment_count, "
                    "comment_hwm, artifact_index, degraded, is_current) "
                    "VALUES (?,?,?,?,?,?,0)",
                    (epoch(now), video_count, comment_count, hwm, index_json,
                     canonical_json(degraded)))
                snapshot_id = cur.lastrowid
                conn.execute("UPDATE snapshots SET is_current=0 WHERE is_current=1")
                conn.execute("UPDATE snapshots SET is_current=1 WHERE snapshot_id=?",
                             (snapshot_id,))
        return self.get_snapshot(snapshot_id)

    def _snapshot_from_row(self, row) -> CorpusSnapshot:
        index = {k: ArtifactKey(**v)
                 for k, v in json.loads(row["artifact_index"]).items()}
        return CorpusSnapshot(
            snapshot_id=row["snapshot_id"], created_at=from_epoch(row["created_at"]),
            video_count=row["video_count"], comment_count=row["comment_count"],
            artifact_index=index, comment_hwm=row["comment_hwm"],
            degraded=json.loads(row["degraded"]))

    def get_snapshot(self, snapshot_id: int) -> CorpusSnapshot | None:
        row = self._conn.execute("SELECT * FROM snapshots WHERE snapshot_id=?",
                                 (snapshot_id,)).fetchone()
        return self._snapshot_from_row(row) if row else None

    def current_snapshot(self) -> CorpusSnapshot | None:
        row = self._conn.execute(
            "SELECT * FROM snapshots WHERE is_current=1").fetchone()
        return self._snapshot_from_row(row) if row else None

    # ---- fetch runs ------------------------------------------------------------

    def start_fetch_run(self, channel_id: str) -> int:
        with self._txn() as conn:
            cur = conn.execute(
                "INSERT INTO fetch_runs(channel_id, started_at) VALUES (?, ?)",
                (channel_id, epoch(utcnow())))
            return cur.lastrowid

    def finish_fetch_run(self, run_id: int, manifest: FetchManifest) -> None:
        with self._txn() as conn:
            conn.execute(
                "UPDATE fetch_runs SET videos_fetched=?, comments_fetched=?, "
                "pages_consumed=?, finished_at=?, resume_cursor=? WHERE run_id=?",
                (manifest.videos_fetched, manifest.comments_fetched,
                 manifest.pages_consumed, epoch(utcnow()), manifest.resume_cursor,
                 run_id))

    def latest_resume_cursor(self, channel_id: str) -> str | None:
        row = self._conn.execute(
            "SELECT resume_cursor FROM fetch_runs WHERE channel_id=? "
            "ORDER BY run_id DESC LIMIT 1", (channel_id,)).fetchone()
        return row["resume_cursor"] if row else None

    # ---- locks -------------------------------------------------------------------

    @contextmanager
    def hold_lock(self, name: str, error: Exception | None = None):
        """Cross-process advisory lock backed by a table row."""
        try:
            with self._txn() as conn:
                conn.execute("INSERT INTO locks(name, acquired_at, owner) VALUES (?,?,?)",
                             (name, epoch(utcnow()), str(os.getpid())))
        except sqlite3.IntegrityError:
            raise (error or IngestLockedError(f"lock {name!r} is held")) from None
        try:
            yield
        finally:
            with self._txn() as conn:
                conn.execute("DELETE FROM locks WHERE name=?", (name,))

    def ingest_lock(self, channel_id: str):
        return self.hold_lock(f"ingest:{channel_id}", IngestLockedError(
            f"an ingest for channel {channel_id!r} is already running"))
