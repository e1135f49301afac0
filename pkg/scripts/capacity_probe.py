#!/usr/bin/env python3
"""Capacity probe: build a synthetic 100k-comment corpus, run the sentiment
and topics stages with stub models, and measure peak memory plus
query_comments latency. Prints one JSON line with the measurements.

Used by the acceptance suite (subprocess, so peak RSS reflects only this
workload) and runnable by hand:

    python scripts/capacity_probe.py --comments 100000
"""

from __future__ import annotations

import argparse
import json
import os
import random
import resource
import sys
import tempfile
import time
from datetime import datetime, timedelta, timezone

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from commentlens.config import AppConfig  # noqa: E402
from commentlens.models import ChannelRef, CommentRecord, VideoRecord  # noqa: E402
from commentlens.pipeline import PipelineRunSpec, run_pipeline  # noqa: E402
from commentlens.store import CommentFilter, Store  # noqa: E402

UTC = timezone.utc

FAMILY_WORDS = [
    ["levee", "floodplain", "sandbags", "culvert", "embankment", "dredging"],
    ["zoning", "setback", "variance", "easement", "parcel", "ordinance"],
    ["settlement", "plaintiff", "litigation", "damages", "counsel", "appeal"],
    ["cinematography", "framing", "grading", "montage", "lenses", "exposure"],
    ["narration", "voiceover", "cadence", "diction", "pacing", "tone"],
    ["pension", "actuarial", "liability", "funded", "annuity", "benefit"],
    ["transit", "headway", "ridership", "farebox", "corridor", "busway"],
    ["wildfire", "fuelbreak", "containment", "evacuation", "embers", "acreage"],
    ["tariff", "imports", "dumping", "quota", "subsidy", "freight"],
    ["glacier", "moraine", "meltwater", "icefall", "crevasse", "permafrost"],
    ["vaccine", "placebo", "efficacy", "cohort", "booster", "antibody"],
    ["bitcoin", "ledger", "custody", "exchange", "wallet", "liquidity"],
    ["opera", "libretto", "soprano", "staging", "overture", "aria"],
    ["fisheries", "bycatch", "trawler", "quota", "hatchery", "spawning"],
    ["asbestos", "abatement", "exposure", "insulation", "fibers", "remediation"],
    ["broadband", "latency", "fiber", "spectrum", "backhaul", "peering"],
    ["drought", "aquifer", "irrigation", "reservoir", "allocation", "runoff"],
    ["warehouse", "automation", "forklift", "throughput", "picking", "conveyor"],
    ["charter", "enrollment", "voucher", "curriculum", "tenure", "district"],
    ["stadium", "subsidy", "concourse", "naming", "luxury", "attendance"],
]
SENTIMENT_WORDS = ["great", "terrible", "amazing", "awful", "the", "this"]


def build_corpus(store: Store, n_comments: int, n_videos: int,
                 seed: int) -> None:
    rng = random.Random(seed)
    store.upsert_channel(ChannelRef("UCcapacity", "Capacity Channel"))
    base = datetime(2022, 1, 3, tzinfo=UTC)
    fetched = datetime(2024, 2, 1, tzinfo=UTC)
    videos = [VideoRecord(
        video_id=f"cap{i:02d}", channel_id="UCcapacity",
        title=f"Capacity Video {i:02d}",
        published_at=base + timedelta(days=30 * i), view_count=1000 * i,
        like_count=10 * i, comment_count_reported=0, fetched_at=fetched)
        for i in range(n_videos)]
    store.upsert_videos(videos)
    batch: list[CommentRecord] = []
    for i in range(n_comments):
        family = FAMILY_WORDS[i % len(FAMILY_WORDS)]
        words = [rng.choice(family) for _ in range(6)]
        words.append(rng.choice(SENTIMENT_WORDS))
        words.append(f"case{i % 9973}")
        rng.shuffle(words)
        batch.append(CommentRecord(
            comment_id=f"cc{i:06d}", video_id=f"cap{i % n_videos:02d}",
            parent_id=None, author_id=f"UCa{i % 5000:04d}",
            author_display=f"viewer {i % 5000}",
            text=" ".join(words),
            published_at=base + timedelta(minutes=i % (2 * 365 * 24 * 60)),
            like_count=i % 50))
        if len(batch) >= 5000:
            store.upsert_comments(batch)
            batch = []
    if batch:
        store.upsert_comments(batch)


def measure_query_latency(store: Store, n_videos: int, trials: int,
                          seed: int) -> dict:
    rng = random.Random(seed)
    total = store.count_comments()
    latencies = []
    for t in range(trials):
        roll = rng.random()
        if roll < 0.45:
            flt = CommentFilter(video_id=f"cap{rng.randrange(n_videos):02d}")
            pages = max(1, total // n_videos // 100)
        elif roll < 0.9:
            flt = CommentFilter()
            pages = max(1, total // 100)
        else:
            flt = CommentFilter(text_substring=rng.choice(
                ["levee", "zoning", "case123", "glacier"]))
            pages = 3
        page = rng.randrange(1, pages + 1)
        t0 = time.perf_counter()
        store.query_comments(flt, page=page, page_size=100)
        latencies.append((time.perf_counter() - t0) * 1000)
    latencies.sort()
    return {
        "p50_ms": latencies[len(latencies) // 2],
        "p95_ms": latencies[int(len(latencies) * 0.95)],
        "max_ms": latencies[-1],
    }


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--comments", type=int, default=100_000)
    parser.add_argument("--videos", type=int, default=10)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--latency-trials", type=int, default=200)
    args = parser.parse_args()

    with tempfile.TemporaryDirectory() as workdir:
        cfg = AppConfig()
        cfg.db_path = os.path.join(workdir, "capacity.db")
        store = Store(cfg.db_path)

        t0 = time.time()
        build_corpus(store, args.comments, args.videos, args.seed)
        build_s = time.time() - t0

        t0 = time.time()
        snapshot = run_pipeline(store, PipelineRunSpec(
            stages=("sentiment", "topics"), seed=args.seed, config=cfg))
        analyze_s = time.time() - t0

        topics_blob = store.get_artifact(snapshot.key_for("topics", "channel"))
        latency = measure_query_latency(store, args.videos,
                                        args.latency_trials, args.seed)
        peak_rss_mb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024
        result = {
            "comment_count": store.count_comments(),
            "build_s": round(build_s, 1),
            "analyze_s": round(analyze_s, 1),
            "peak_rss_mb": round(peak_rss_mb, 1),
            "n_clusters": sum(1 for c in topics_blob["clusters"]
                              if c["cluster_id"] != -1),
            "degraded": snapshot.degraded,
            **{k: round(v, 2) for k, v in latency.items()},
        }
        store.close()
    print(json.dumps(result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
