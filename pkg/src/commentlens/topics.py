"""Channel-wide topic discovery: embed comments, reduce, density-cluster,
label clusters with the LLM, and build the topic share/sentiment table."""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np
from sklearn.cluster import HDBSCAN

from .config import AppConfig
from .embeddings import Embedder
from .llm import LLMClient
from .models import ClusterAssignment, CommentRecord, TopicCluster
from .reduction import ReducedMatrix, reduce_dimensions
from .store import Store
from .utils import sha256_text

NOISE_ID = -1
NOISE_LABEL = "Unclustered"
MAX_EXEMPLARS = 10


@dataclass
class EmbeddingMatrix:
    comment_ids: list[str]
    vectors: np.ndarray
    model_id: str
    normalized: bool = True


def embed_comments(comments: list[CommentRecord], embedder: Embedder,
                   batch_size: int = 256) -> EmbeddingMatrix:
    """Embed comment texts; identical texts share one model call."""
    unique: dict[str, int] = {}
    order: list[str] = []
    for c in comments:
        if c.text not in unique:
            unique[c.text] = len(order)
            order.append(c.text)
    rows = []
    for i in range(0, len(order), batch_size):
        rows.append(embedder.embed(order[i:i + batch_size]))
    uniq_vectors = np.vstack(rows) if rows else np.zeros((0, 1))
    index = np.fromiter((unique[c.text] for c in comments), dtype=np.int64,
                        count=len(comments))
    return EmbeddingMatrix(
        comment_ids=[c.comment_id for c in comments],
        vectors=uniq_vectors[index],
        model_id=embedder.model_id)


def cluster(reduced: ReducedMatrix | np.ndarray, comment_ids: list[str],
            min_cluster_size: int = 15) -> list[ClusterAssignment]:
    """Hierarchical density clustering; undersized inputs are all noise.

    Found clusters are relabeled 0..K-1 by descending member count (ties by
    original label) so ids are stable and meaningful.
    """
    matrix = reduced.matrix if isinstance(reduced, ReducedMatrix) else reduced
    n = matrix.shape[0]
    if n != len(comment_ids):
        raise ValueError("matrix rows and comment_ids differ in length")
    if n < min_cluster_size:
        return [ClusterAssignment(cid, NOISE_ID, 0.0) for cid in comment_ids]
    model = HDBSCAN(min_cluster_size=min_cluster_size)
    model.fit(matrix)
    raw = model.labels_
    strengths = getattr(model, "probabilities_", np.ones(n))
    counts: dict[int, int] = {}
    for lbl in raw:
        if lbl != NOISE_ID:
            counts[int(lbl)] = counts.get(int(lbl), 0) + 1
    remap = {old: new for new, old in enumerate(
        sorted(counts, key=lambda c: (-counts[c], c)))}
    remap[NOISE_ID] = NOISE_ID
    return [
        ClusterAssignment(cid, remap[int(lbl)], float(s))
        for cid, lbl, s in zip(comment_ids, raw, strengths)]


def label_clusters(assignments: list[ClusterAssignment],
                   comments: dict[str, str], llm: LLMClient,
                   label_template: str, sample_per_cluster: int = 30,
                   max_words: int = 12, seed: int = 0) -> tuple[dict[int, str], set[int]]:
    """One LLM label per non-noise cluster from a random member sample.

    Returns (labels, degraded_ids). A cluster whose LLM call fails or comes
    back empty gets the fallback label 'Topic {id}' and is flagged degraded.
    The noise cluster is labeled without consulting the LLM.
    """
    members: dict[int, list[str]] = {}
    for a in assignments:
        members.setdefault(a.cluster_id, []).append(a.comment_id)
    labels: dict[int, str] = {}
    degraded: set[int] = set()
    for cluster_id in sorted(members):
        if cluster_id == NOISE_ID:
            labels[cluster_id] = NOISE_LABEL
            continue
        ids = sorted(members[cluster_id])
        rng = random.Random(f"{seed}:label:{cluster_id}")
        if len(ids) > sample_per_cluster:
            ids = rng.sample(ids, sample_per_cluster)
        lines = "\n".join(f"[{i + 1}] {comments[cid]}" for i, cid in enumerate(ids))
        prompt = label_template.format(comments=lines, max_words=max_words)
        try:
            label = llm.complete(prompt).strip().strip('"')
        except Exception:
            label = ""
        if not label:
            labels[cluster_id] = f"Topic {cluster_id}"
            degraded.add(cluster_id)
            continue
        words = label.split()
        if len(words) > max_words:
            label = " ".join(words[:max_words])
        labels[cluster_id] = label
    return labels, degraded


def topic_table(assignments: list[ClusterAssignment], labels: dict[int, str],
                scalars: dict[str, float],
                degraded: set[int] | None = None) -> list[TopicCluster]:
    """Share and sentiment statistics per cluster, ordered by share descending.

    Shares include the noise row, so they sum to 100. Sentiment variance is
    the population variance of member scalars. Exemplars are the highest-
    membership members (ties by comment_id).
    """
    degraded = degraded or set()
    total = len(assignments)
    members: dict[int, list[ClusterAssignment]] = {}
    for a in assignments:
        members.setdefault(a.cluster_id, []).append(a)
    out = []
    for cluster_id, rows in members.items():
        # assignments arrive in (published_at, comment_id) order; keep it so
        # member paging reads chronologically
        member_ids = [r.comment_id for r in rows]
        values = np.array([scalars[cid] for cid in member_ids if cid in scalars])
        mean = float(values.mean()) if values.size else 0.0
        var = float(values.var()) if values.size else 0.0
        exemplars = sorted(rows, key=lambda r: (-r.membership_strength, r.comment_id))
        out.append(TopicCluster(
            cluster_id=cluster_id,
            label=labels.get(cluster_id, NOISE_LABEL if cluster_id == NOISE_ID
                             else f"Topic {cluster_id}"),
            member_count=len(rows),
            share_pct=100.0 * len(rows) / total if total else 0.0,
            sentiment_mean=mean,
            sentiment_variance=var,
            sentiment_stddev=float(np.sqrt(var)),
            exemplar_comment_ids=[r.comment_id for r in exemplars[:MAX_EXEMPLARS]],
            member_comment_ids=member_ids,
            degraded=cluster_id in degraded))
    out.sort(key=lambda c: (-c.share_pct, c.cluster_id))
    return out


def run_topics(store: Store, cfg: AppConfig, embedder: Embedder,
               llm: LLMClient, seed: int, video_id: str | None = None) -> dict:
    """Full topic stage over a scope's comments (whole channel by default);
    returns the artifact dict."""
    comments = list(store.iter_comments(video_id))
    label_template = cfg.themes.prompt_text("label")
    if not comments:
        return {"clusters": [], "total_comments": 0,
                "embedding_model": embedder.model_id, "params": _params(cfg, seed)}
    matrix = embed_comments(comments, embedder, cfg.embedding.batch_size)
    if len(comments) < 2:
        assignments = [ClusterAssignment(c.comment_id, NOISE_ID, 0.0)
                       for c in comments]
    else:
        reduced = reduce_dimensions(
            matrix.vectors, target_dim=cfg.topics.target_dim,
            n_neighbors=cfg.topics.n_neighbors, seed=seed,
            n_epochs=cfg.topics.n_epochs)
        assignments = cluster(reduced, matrix.comment_ids,
                              cfg.topics.min_cluster_size)
    texts = {c.comment_id: c.text for c in comments}
    labels, degraded = label_clusters(
        assignments, texts, llm, label_template,
        sample_per_cluster=cfg.topics.sample_per_cluster,
        max_words=cfg.topics.max_label_words, seed=seed)
    scalars = store.scalar_map([c.comment_id for c in comments])
    table = topic_table(assignments, labels, scalars, degraded)
    return {
        "clusters": [
            {**c.to_row(), "member_comment_ids": c.member_comment_ids}
            for c in table],
        "total_comments": len(comments),
        "embedding_model": embedder.model_id,
        "params": _params(cfg, seed),
    }


def _params(cfg: AppConfig, seed: int) -> dict:
    return {
        "target_dim": cfg.topics.target_dim,
        "n_neighbors": cfg.topics.n_neighbors,
        "min_cluster_size": cfg.topics.min_cluster_size,
        "sample_per_cluster": cfg.topics.sample_per_cluster,
        "seed": seed,
        "label_prompt_digest": sha256_text(cfg.themes.prompt_text("label")),
    }
