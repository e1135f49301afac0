"""Analysis orchestration: run stages in dependency order, cache artifacts
by config digest, publish one snapshot.

Artifacts are cached on (kind, scope, digest) where the digest folds in both
the influencing parameters and a per-scope corpus fingerprint, so re-running
with unchanged config and data reuses cached results (LLM calls are not
repeated) while any change recomputes.
"""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from datetime import datetime

from . import alerts as alerts_mod
from . import analytics, sentiment, themes, topics
from .config import AppConfig
from .embeddings import get_embedder
from .errors import (DependencyError, IngestEmptyError, LLMOutputError,
                     ModelUnavailableError)
from .llm import get_llm
from .models import CHANNEL_SCOPE, ArtifactKey, CorpusSnapshot
from .store import Store
from .textutil import load_stopwords
from .utils import digest_params, to_iso

log = logging.getLogger(__name__)

ANALYSIS_STAGES = ("sentiment", "stats", "topics", "themes", "alerts")
ALL_STAGES = ("ingest",) + ANALYSIS_STAGES


@dataclass
class PipelineRunSpec:
    stages: tuple[str, ...] = ANALYSIS_STAGES
    seed: int | None = None  # None = config seed
    config: AppConfig = field(default_factory=AppConfig)


def expected_sentiment_model_id(cfg: AppConfig) -> str:
    """Model id the sentiment stage will write, without loading the model."""
    if cfg.sentiment.model_id == "lexicon-stub":
        from .config import data_file
        path = cfg.sentiment.lexicon_path or data_file("sentiment_lexicon.json")
        with open(path, encoding="utf-8") as fh:
            version = json.load(fh)["version"]
        return f"lexicon-stub-v{version}"
    return cfg.sentiment.model_id


class _Run:
    def __init__(self, store: Store, cfg: AppConfig, seed: int):
        self.store = store
        self.cfg = cfg
        self.seed = seed
        self.index: dict[str, ArtifactKey] = {}
        self.degraded: list[dict] = []
        videos = store.list_videos()
        self.video_ids = [v.video_id for v in videos]
        horizon = max((v.fetched_at for v in videos), default=None)
        self.generated_at: datetime | None = horizon

    def scope_fingerprint(self, scope: str) -> dict:
        video_id = None if scope == CHANNEL_SCOPE else scope
        return {"count": self.store.count_comments(video_id),
                "hwm": self.store.comment_hwm(video_id)}

    def key(self, kind: str, scope: str) -> ArtifactKey:
        digest = digest_params({
            "config": self.cfg.artifact_digest(kind, self.seed),
            "corpus": self.scope_fingerprint(scope),
        })
        return ArtifactKey(kind=kind, scope_id=scope, config_digest=digest)

    def cached(self, kind: str, scope: str, compute) -> None:
        """Fill the index from cache, or compute, store, and index."""
        key = self.key(kind, scope)
        if self.store.get_artifact_text(key) is None:
            self.store.put_artifact(key, compute())
        self.index[key.index_key] = key

    def degrade(self, stage: str, scope: str, reason: str) -> None:
        log.warning("stage %s degraded for scope %s: %s", stage, scope, reason)
        self.degraded.append({"stage": stage, "scope": scope, "reason": reason})


def run_pipeline(store: Store, spec: PipelineRunSpec) -> CorpusSnapshot:
    """Execute the requested stages and publish a snapshot; returns it.

    Per-scope LLM failures degrade that scope and continue. A missing hard
    dependency (topics/alerts without sentiment scores) raises
    DependencyError before any stage runs.
    """
    cfg = spec.config
    seed = cfg.seed if spec.seed is None else spec.seed
    stages = tuple(spec.stages)
    for stage in stages:
        if stage not in ALL_STAGES:
            raise DependencyError(f"unknown stage {stage!r}")
    if not store.video_ids():
        raise IngestEmptyError("no ingested data; run ingest first")

    model_id = expected_sentiment_model_id(cfg)
    scores_will_exist = "sentiment" in stages or (
        store.sentiment_model() == model_id
        and store.unscored_comment_count(model_id) == 0)
    for stage in ("topics", "alerts"):
        if stage in stages and not scores_will_exist:
            raise DependencyError(
                f"stage {stage!r} requires sentiment scores; "
                "run the sentiment stage first")

    run = _Run(store, cfg, seed)
    t0 = time.time()
    if "sentiment" in stages:
        _stage_sentiment(run)
    if "stats" in stages:
        _stage_stats(run)
    if "topics" in stages:
        _stage_topics(run)
    if "themes" in stages:
        _stage_themes(run)
    if "alerts" in stages:
        _stage_alerts(run)
    snapshot = store.publish_snapshot(run.index, run.degraded)
    log.info("pipeline stages=%s finished in %.1fs, snapshot %d",
             ",".join(stages), time.time() - t0, snapshot.snapshot_id)
    return snapshot


def _stage_sentiment(run: _Run) -> None:
    classifier = sentiment.get_classifier(run.cfg)  # ModelUnavailable is fatal here
    sentiment.score_comments(run.store, classifier, run.cfg.sentiment.batch_size,
                             run.cfg.sentiment.max_batch_size)

    def channel_artifact():
        mean = sentiment.mean_sentiment(run.store, CHANNEL_SCOPE)
        return {"scope": CHANNEL_SCOPE, "mean": mean,
                "count": run.store.count_comments(),
                "model_id": classifier.model_id}

    run.cached("sentiment", CHANNEL_SCOPE, channel_artifact)
    for vid in run.video_ids:
        def video_artifact(vid=vid):
            return {"scope": vid,
                    "mean": sentiment.mean_sentiment(run.store, vid),
                    "count": run.store.count_comments(vid),
                    "monthly": sentiment.monthly_sentiment_series(run.store, vid),
                    "model_id": classifier.model_id}
        run.cached("sentiment", vid, video_artifact)


def _stage_stats(run: _Run) -> None:
    store, cfg = run.store, run.cfg
    for vid in run.video_ids:
        def stats_artifact(vid=vid):
            stats = analytics.video_summary(store, vid)
            series = {
                bucket: [{"bucket_start": to_iso(start), "count": count}
                         for start, count in
                         analytics.comment_time_histogram(store, vid, bucket)]
                for bucket in analytics.BUCKETS}
            return {**stats.to_dict(), "timeseries": series}
        run.cached("stats", vid, stats_artifact)
    run.cached("stats", CHANNEL_SCOPE,
               lambda: analytics.channel_summary(store).to_dict())

    if store.sentiment_model() is None:
        run.degrade("stats", CHANNEL_SCOPE,
                    "wordcloud and superfans skipped: no sentiment scores")
        return
    stopwords = load_stopwords(cfg.stopwords_path) | \
        frozenset(w.casefold() for w in cfg.extra_stopwords)
    for vid in run.video_ids:
        def wordcloud_artifact(vid=vid):
            terms = analytics.wordcloud_terms(store, vid, cfg.wordcloud_k,
                                              frozenset(stopwords))
            return {"video_id": vid, "terms": [t.to_dict() for t in terms]}
        run.cached("wordcloud", vid, wordcloud_artifact)
    run.cached("superfans", CHANNEL_SCOPE, lambda: {
        "superfans": [e.to_dict() for e in analytics.superfans(
            store, cfg.superfan.min_comments, cfg.superfan.top_n,
            cfg.superfan.include_replies)],
        "min_comments": cfg.superfan.min_comments})


def _stage_topics(run: _Run) -> None:
    try:
        embedder = get_embedder(run.cfg)
        llm = get_llm(run.cfg)
    except ModelUnavailableError as exc:
        run.degrade("topics", CHANNEL_SCOPE, str(exc))
        return
    run.cached("topics", CHANNEL_SCOPE,
               lambda: topics.run_topics(run.store, run.cfg, embedder, llm,
                                         run.seed))
    if run.cfg.topics.per_video:
        for vid in run.video_ids:
            run.cached("topics", vid, lambda v=vid: topics.run_topics(
                run.store, run.cfg, embedder, llm, run.seed, video_id=v))


def _stage_themes(run: _Run) -> None:
    try:
        llm = get_llm(run.cfg)
    except ModelUnavailableError as exc:
        run.degrade("themes", CHANNEL_SCOPE, str(exc))
        return
    generated_at = run.generated_at
    scopes = [(CHANNEL_SCOPE, "themes", "themes_channel"),
              (CHANNEL_SCOPE, "suggestions", "suggestions_channel")]
    for vid in run.video_ids:
        scopes.append((vid, "themes", "themes_video"))
        scopes.append((vid, "suggestions", "suggestions_video"))

    # generation (the LLM round-trips) runs with bounded parallelism; cache
    # checks and datastore writes stay on this thread
    pending = []
    for scope, report_kind, artifact_kind in scopes:
        if run.store.count_comments(
                None if scope == CHANNEL_SCOPE else scope) == 0:
            continue  # nothing to sample; endpoint reports not_computed
        key = run.key(artifact_kind, scope)
        if run.store.get_artifact_text(key) is not None:
            run.index[key.index_key] = key
            continue
        pending.append((key, scope, report_kind, artifact_kind))
    if not pending:
        return

    def generate(scope: str, report_kind: str) -> dict:
        # each worker reads through its own connection; WAL readers coexist
        reader = Store(run.store.path, read_only=True)
        try:
            return themes.generate_report(reader, llm, run.cfg, scope,
                                          report_kind, run.seed,
                                          generated_at).to_dict()
        finally:
            reader.close()

    workers = max(1, run.cfg.themes.max_parallel_requests)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {
            pool.submit(generate, scope, report_kind): (key, scope, artifact_kind)
            for key, scope, report_kind, artifact_kind in pending}
        for future in as_completed(futures):
            key, scope, artifact_kind = futures[future]
            try:
                blob = future.result()
            except (LLMOutputError, ModelUnavailableError) as exc:
                run.degrade("themes", f"{artifact_kind}:{scope}", str(exc))
                continue
            run.store.put_artifact(key, blob)
            run.index[key.index_key] = key


def _stage_alerts(run: _Run) -> None:
    run.cached("alerts", CHANNEL_SCOPE,
               lambda: {"alerts": alerts_mod.run_alerts(run.store, run.cfg)})
