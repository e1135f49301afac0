"""Pipeline orchestration: stage deps, artifact completeness, caching,
degradation, determinism."""

from __future__ import annotations

import json

import pytest

from commentlens import pipeline as pl
from commentlens.config import AppConfig
from commentlens.errors import DependencyError, IngestEmptyError
from commentlens.ingest import ingest_fixture
from commentlens.llm import ScriptedLLM, StubLLM
from commentlens.models import ARTIFACT_KINDS, CHANNEL_SCOPE, CommentRecord
from commentlens.pipeline import PipelineRunSpec, run_pipeline
from commentlens.store import Store

from conftest import DEMO_DIR, comment_dict, video_dict, write_bundle


def small_bundle(tmp_path, n_comments=30, n_videos=2):
    videos = [video_dict(f"v{i + 1}", f"Video {i + 1}",
                         published=f"2023-0{i + 1}-02T12:00:00Z")
              for i in range(n_videos)]
    comments = []
    words = ["great levee footage", "terrible zoning mess", "the council vote",
             "amazing settlement reporting", "boring filler content"]
    for i in range(n_comments):
        comments.append(comment_dict(
            f"c{i:03d}", video_id=f"v{(i % n_videos) + 1}",
            text=f"{words[i % len(words)]} number {i}",
            published=f"2023-0{(i % 3) + 1}-{(i % 27) + 1:02d}T10:00:00Z"))
    return write_bundle(tmp_path / "bundle", {"channel_id": "UCsmall"},
                        videos, comments)


def test_full_run_produces_every_artifact_kind(store, cfg, tmp_path):
    ingest_fixture(store, small_bundle(tmp_path))
    snapshot = run_pipeline(store, PipelineRunSpec(config=cfg))
    kinds = {key.kind for key in snapshot.artifact_index.values()}
    assert kinds == set(ARTIFACT_KINDS)
    assert snapshot.degraded == []
    assert snapshot.video_count == 2
    assert snapshot.comment_count == 30


def test_partial_run_sentiment_only(store, cfg, tmp_path):
    ingest_fixture(store, small_bundle(tmp_path))
    snapshot = run_pipeline(store, PipelineRunSpec(stages=("sentiment",),
                                                   config=cfg))
    kinds = {key.kind for key in snapshot.artifact_index.values()}
    assert kinds == {"sentiment"}
    assert snapshot.key_for("topics", CHANNEL_SCOPE) is None


def test_topics_without_sentiment_fails_dependency(store, cfg, tmp_path):
    ingest_fixture(store, small_bundle(tmp_path))
    with pytest.raises(DependencyError, match="sentiment"):
        run_pipeline(store, PipelineRunSpec(stages=("topics",), config=cfg))


def test_topics_after_separate_sentiment_run_ok(store, cfg, tmp_path):
    ingest_fixture(store, small_bundle(tmp_path))
    run_pipeline(store, PipelineRunSpec(stages=("sentiment",), config=cfg))
    snapshot = run_pipeline(store, PipelineRunSpec(stages=("topics",), config=cfg))
    assert snapshot.key_for("topics", CHANNEL_SCOPE) is not None


def test_empty_store_raises_ingest_empty(store, cfg):
    with pytest.raises(IngestEmptyError):
        run_pipeline(store, PipelineRunSpec(config=cfg))


def test_unknown_stage_rejected(store, cfg, tmp_path):
    ingest_fixture(store, small_bundle(tmp_path))
    with pytest.raises(DependencyError, match="unknown stage"):
        run_pipeline(store, PipelineRunSpec(stages=("sentiment", "frobnicate"),
                                            config=cfg))


def test_llm_cache_prevents_repeat_calls(store, cfg, tmp_path, monkeypatch):
    ingest_fixture(store, small_bundle(tmp_path))
    stub = StubLLM()
    monkeypatch.setattr(pl, "get_llm", lambda _cfg: stub)
    run_pipeline(store, PipelineRunSpec(config=cfg))
    calls_first = len(stub.calls)
    assert calls_first > 0
    run_pipeline(store, PipelineRunSpec(config=cfg))
    assert len(stub.calls) == calls_first  # every artifact served from cache


def test_new_data_invalidates_scope_cache(store, cfg, tmp_path, monkeypatch):
    ingest_fixture(store, small_bundle(tmp_path))
    stub = StubLLM()
    monkeypatch.setattr(pl, "get_llm", lambda _cfg: stub)
    run_pipeline(store, PipelineRunSpec(stages=("sentiment", "themes"), config=cfg))
    calls_first = len(stub.calls)
    # one new comment lands on v1: its reports and the channel's recompute
    store.upsert_comments([CommentRecord.from_dict(comment_dict(
        "fresh", video_id="v1", published="2023-03-30T00:00:00Z"))])
    run_pipeline(store, PipelineRunSpec(stages=("sentiment", "themes"), config=cfg))
    assert len(stub.calls) == calls_first + 4  # themes+suggestions for v1 and channel


def test_llm_failure_degrades_scope_and_continues(store, cfg, tmp_path, monkeypatch):
    ingest_fixture(store, small_bundle(tmp_path))
    # fails both attempts for the first scope, then succeeds for the rest
    good = StubLLM()
    bad_then_good = ScriptedLLM(["garbage", "more garbage"])

    class Hybrid:
        model_id = "hybrid-llm"

        def __init__(self):
            self.count = 0

        def complete(self, prompt):
            self.count += 1
            if self.count <= 2:
                return bad_then_good.complete(prompt)
            return good.complete(prompt)

    monkeypatch.setattr(pl, "get_llm", lambda _cfg: Hybrid())
    snapshot = run_pipeline(store, PipelineRunSpec(
        stages=("sentiment", "themes"), config=cfg))
    assert len(snapshot.degraded) == 1
    assert snapshot.degraded[0]["stage"] == "themes"
    # the other scopes still produced artifacts
    kinds = [k for k in snapshot.artifact_index if k.startswith("themes")
             or k.startswith("suggestions")]
    assert len(kinds) == 5  # 6 scope-kind pairs minus the degraded one


def test_two_fresh_runs_byte_identical(cfg, tmp_path):
    """Same fixture + same seed into two fresh stores: identical artifacts."""
    blobs = []
    for name in ("a", "b"):
        db = Store(str(tmp_path / f"{name}.db"))
        ingest_fixture(db, small_bundle(tmp_path / name))
        config = AppConfig()
        config.db_path = str(tmp_path / f"{name}.db")
        snapshot = run_pipeline(db, PipelineRunSpec(seed=11, config=config))
        dump = {}
        for index_key, key in sorted(snapshot.artifact_index.items()):
            dump[index_key] = db.get_artifact_text(key)
        blobs.append(dump)
        db.close()
    assert blobs[0] == blobs[1]


def test_seed_changes_sampled_artifacts(store, cfg, tmp_path):
    ingest_fixture(store, small_bundle(tmp_path, n_comments=200))
    snap_a = run_pipeline(store, PipelineRunSpec(
        stages=("sentiment", "themes"), seed=1, config=cfg))
    snap_b = run_pipeline(store, PipelineRunSpec(
        stages=("sentiment", "themes"), seed=2, config=cfg))
    key_a = snap_a.key_for("themes_channel", CHANNEL_SCOPE)
    key_b = snap_b.key_for("themes_channel", CHANNEL_SCOPE)
    assert key_a.config_digest != key_b.config_digest
    sample_a = json.loads(store.get_artifact_text(key_a))["sample"]["comment_ids"]
    sample_b = json.loads(store.get_artifact_text(key_b))["sample"]["comment_ids"]
    assert sample_a != sample_b


def test_per_video_topics_config_gated(store, cfg, tmp_path):
    ingest_fixture(store, small_bundle(tmp_path))
    snapshot = run_pipeline(store, PipelineRunSpec(
        stages=("sentiment", "topics"), config=cfg))
    assert snapshot.key_for("topics", "v1") is None  # off by default

    cfg.topics.per_video = True
    snapshot = run_pipeline(store, PipelineRunSpec(
        stages=("sentiment", "topics"), config=cfg))
    for vid in ("v1", "v2"):
        key = snapshot.key_for("topics", vid)
        assert key is not None
        blob = store.get_artifact(key)
        assert blob["total_comments"] == store.count_comments(vid)


def test_demo_fixture_full_run(store, cfg):
    """The bundled demo corpus drives every stage to a clean snapshot."""
    ingest_fixture(store, DEMO_DIR)
    snapshot = run_pipeline(store, PipelineRunSpec(config=cfg))
    assert {k.kind for k in snapshot.artifact_index.values()} == set(ARTIFACT_KINDS)
    topics_blob = store.get_artifact(snapshot.key_for("topics", CHANNEL_SCOPE))
    non_noise = [c for c in topics_blob["clusters"] if c["cluster_id"] != -1]
    assert len(non_noise) >= 3  # the authored vocabulary families are found
    alerts_blob = store.get_artifact(snapshot.key_for("alerts", CHANNEL_SCOPE))
    kinds = {a["kind"] for a in alerts_blob["alerts"]}
    assert {"volume_high", "volume_low", "sentiment_positive",
            "update_requests"} <= kinds
    fans = store.get_artifact(snapshot.key_for("superfans", CHANNEL_SCOPE))
    assert [f["author_display"] for f in fans["superfans"]] == \
        ["DocsDevotee", "ArchiveOwl"]
