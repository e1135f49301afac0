"""Topic pipeline: embedding stub, reduction, clustering, labels, table."""

from __future__ import annotations

import numpy as np
import pytest
from sklearn.cluster import HDBSCAN as SKHDBSCAN
from sklearn.metrics import adjusted_rand_score

from commentlens.config import AppConfig
from commentlens.embeddings import HashEmbedder
from commentlens.llm import ScriptedLLM, StubLLM
from commentlens.models import ClusterAssignment
from commentlens.reduction import reduce_dimensions
from commentlens.topics import (cluster, embed_comments, label_clusters,
                                topic_table)

from conftest import assert_close, make_comment


def make_blobs(n_blobs: int, per_blob: int, sep: float = 10.0, dim: int = 32,
               seed: int = 1):
    """Gaussian blobs with unit sigma and centers `sep` sigmas apart."""
    rng = np.random.default_rng(seed)
    dirs = rng.standard_normal((n_blobs, dim))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    centers = dirs * (sep / np.sqrt(2) if n_blobs == 2 else sep)
    points = np.vstack([centers[i] + rng.standard_normal((per_blob, dim))
                        for i in range(n_blobs)])
    truth = np.repeat(np.arange(n_blobs), per_blob)
    return points, truth


LABEL_TEMPLATE = AppConfig().themes.prompt_text("label")


# ---- embedding stub --------------------------------------------------------

def test_embed_identical_texts_identical_rows():
    emb = HashEmbedder(32)
    comments = [make_comment("c1", text="same words here"),
                make_comment("c2", text="same words here"),
                make_comment("c3", text="different entirely")]
    matrix = embed_comments(comments, emb)
    assert np.array_equal(matrix.vectors[0], matrix.vectors[1])
    assert not np.array_equal(matrix.vectors[0], matrix.vectors[2])


def test_embed_rows_unit_norm():
    emb = HashEmbedder(32)
    comments = [make_comment(f"c{i}", text=f"text number {i} with words")
                for i in range(50)]
    matrix = embed_comments(comments, emb)
    norms = np.linalg.norm(matrix.vectors, axis=1)
    assert np.abs(norms - 1.0).max() <= 1e-6


def test_embed_shape_contract():
    emb = HashEmbedder(32)
    comments = [make_comment(f"c{i}", text=f"word{i} and word{i + 1}")
                for i in range(1500)]
    matrix = embed_comments(comments, emb)
    assert matrix.vectors.shape == (1500, 32)
    assert matrix.comment_ids == [c.comment_id for c in comments]
    assert matrix.model_id == "hash-stub-32"


# ---- reduction ---------------------------------------------------------------

def test_reduce_shape():
    points, _ = make_blobs(3, 500)
    reduced = reduce_dimensions(points, target_dim=5, seed=0)
    assert reduced.matrix.shape == (1500, 5)
    assert reduced.reduced


def test_reduce_deterministic_under_seed():
    points, _ = make_blobs(2, 100)
    a = reduce_dimensions(points, target_dim=5, seed=3)
    b = reduce_dimensions(points, target_dim=5, seed=3)
    assert np.array_equal(a.matrix, b.matrix)


def test_reduce_small_n_passthrough_flagged():
    rng = np.random.default_rng(0)
    points = rng.standard_normal((10, 32))
    reduced = reduce_dimensions(points, target_dim=5, n_neighbors=15, seed=0)
    assert not reduced.reduced
    assert reduced.method == "passthrough_small_n"
    assert np.array_equal(reduced.matrix, points[:, :5])


def test_reduce_rejects_tiny_input():
    with pytest.raises(ValueError):
        reduce_dimensions(np.zeros((1, 4)))


def test_reduce_preserves_blob_separability():
    """Nearest-centroid classification of reduced points >= 99% accurate."""
    points, truth = make_blobs(2, 250, seed=5)
    reduced = reduce_dimensions(points, target_dim=5, seed=0).matrix
    centroids = np.vstack([reduced[truth == b].mean(axis=0) for b in (0, 1)])
    dists = ((reduced[:, None, :] - centroids[None]) ** 2).sum(axis=2)
    accuracy = (dists.argmin(axis=1) == truth).mean()
    assert accuracy >= 0.99


# ---- clustering ---------------------------------------------------------------

def test_cluster_two_blobs_ari():
    points, truth = make_blobs(2, 100)
    reduced = reduce_dimensions(points, seed=0)
    ids = [f"c{i}" for i in range(len(truth))]
    assignments = cluster(reduced, ids, min_cluster_size=15)
    labels = [a.cluster_id for a in assignments]
    assert adjusted_rand_score(truth, labels) >= 0.95


def test_cluster_undersized_input_is_all_noise():
    rng = np.random.default_rng(0)
    points = rng.standard_normal((10, 5))
    ids = [f"c{i}" for i in range(10)]
    assignments = cluster(points, ids, min_cluster_size=15)
    assert all(a.cluster_id == -1 for a in assignments)
    assert all(a.membership_strength == 0.0 for a in assignments)


def test_cluster_matches_reference_implementation():
    """Same labels (up to the relabeling permutation) as calling the library
    directly on an input large enough to cluster."""
    points, _ = make_blobs(3, 40, seed=7)
    reduced = reduce_dimensions(points, seed=1)
    ids = [f"c{i}" for i in range(points.shape[0])]
    ours = [a.cluster_id for a in cluster(reduced, ids, min_cluster_size=15)]
    reference = SKHDBSCAN(min_cluster_size=15).fit(reduced.matrix).labels_
    assert adjusted_rand_score(ours, reference) == 1.0
    noise_ours = [i for i, c in enumerate(ours) if c == -1]
    noise_ref = [i for i, c in enumerate(reference) if c == -1]
    assert noise_ours == noise_ref


def test_cluster_totality_and_relabeling():
    points, _ = make_blobs(2, 60, seed=3)
    reduced = reduce_dimensions(points, seed=0)
    ids = [f"c{i}" for i in range(120)]
    assignments = cluster(reduced, ids, min_cluster_size=15)
    assert len(assignments) == 120
    assert [a.comment_id for a in assignments] == ids  # exactly one each
    found = sorted({a.cluster_id for a in assignments} - {-1})
    assert found == list(range(len(found)))  # contiguous ids from 0
    # relabeled by descending size
    sizes = [sum(1 for a in assignments if a.cluster_id == c) for c in found]
    assert sizes == sorted(sizes, reverse=True)
    for a in assignments:
        assert 0.0 <= a.membership_strength <= 1.0


# ---- labeling ------------------------------------------------------------------

def _assignments_two_clusters():
    rows = []
    for i in range(4):
        rows.append(ClusterAssignment(f"c{i}", 0, 1.0))
    for i in range(4, 7):
        rows.append(ClusterAssignment(f"c{i}", 1, 0.9))
    rows.append(ClusterAssignment("c7", -1, 0.0))
    texts = {f"c{i}": "rivers flooding levee" for i in range(4)}
    texts.update({f"c{i}": "zoning rent landlord" for i in range(4, 7)})
    texts["c7"] = "off topic entirely"
    return rows, texts


def test_label_clusters_stub_roundtrip():
    rows, texts = _assignments_two_clusters()
    labels, degraded = label_clusters(rows, texts, StubLLM(), LABEL_TEMPLATE)
    assert set(labels) == {-1, 0, 1}
    assert labels[-1] == "Unclustered"
    assert labels[0] and labels[1]
    assert not degraded


def test_label_noise_never_sent_to_llm():
    rows, texts = _assignments_two_clusters()
    llm = StubLLM()
    label_clusters(rows, texts, llm, LABEL_TEMPLATE)
    assert len(llm.calls) == 2  # one per non-noise cluster only


def test_label_empty_reply_falls_back_degraded():
    rows, texts = _assignments_two_clusters()
    llm = ScriptedLLM(["", "Fine Label"])
    labels, degraded = label_clusters(rows, texts, llm, LABEL_TEMPLATE)
    assert labels[0] == "Topic 0"
    assert degraded == {0}
    assert labels[1] == "Fine Label"


def test_label_llm_exception_degrades_and_continues():
    rows, texts = _assignments_two_clusters()
    llm = ScriptedLLM([])  # raises on every call
    labels, degraded = label_clusters(rows, texts, llm, LABEL_TEMPLATE)
    assert labels == {-1: "Unclustered", 0: "Topic 0", 1: "Topic 1"}
    assert degraded == {0, 1}


def test_label_truncated_to_max_words():
    rows, texts = _assignments_two_clusters()
    llm = ScriptedLLM(["one two three four five", "ok"])
    labels, _ = label_clusters(rows, texts, llm, LABEL_TEMPLATE, max_words=3)
    assert labels[0] == "one two three"


# ---- topic table -----------------------------------------------------------------

def test_table_constant_scalars_zero_variance():
    rows = [ClusterAssignment("a", 0, 1.0), ClusterAssignment("b", 0, 0.8)]
    table = topic_table(rows, {0: "t"}, {"a": 0.5, "b": 0.5})
    assert table[0].sentiment_variance == 0.0
    assert_close(table[0].sentiment_mean, 0.5)


def test_table_share_ratio():
    rows = [ClusterAssignment(f"m{i}", 0, 1.0) for i in range(300)]
    rows += [ClusterAssignment(f"n{i}", -1, 0.0) for i in range(1200)]
    table = topic_table(rows, {0: "big"}, {})
    by_id = {c.cluster_id: c for c in table}
    assert_close(by_id[0].share_pct, 20.0)
    assert_close(by_id[-1].share_pct, 80.0)


def test_table_variance_matches_bruteforce():
    scalars = {"a": 0.2, "b": -0.4, "c": 1.0, "d": 0.0}
    rows = [ClusterAssignment(k, 0, 1.0) for k in scalars]
    table = topic_table(rows, {0: "t"}, scalars)
    values = list(scalars.values())
    mean = sum(values) / len(values)
    variance = sum((v - mean) ** 2 for v in values) / len(values)  # population
    assert_close(table[0].sentiment_variance, variance)
    assert_close(table[0].sentiment_stddev, variance ** 0.5)


def test_table_share_conservation_and_order():
    rows = [ClusterAssignment(f"x{i}", i % 3, 1.0) for i in range(17)]
    rows += [ClusterAssignment(f"y{i}", -1, 0.0) for i in range(5)]
    table = topic_table(rows, {}, {})
    assert_close(sum(c.share_pct for c in table), 100.0, 1e-6)
    shares = [c.share_pct for c in table]
    assert shares == sorted(shares, reverse=True)


def test_table_exemplars_by_strength_ties_by_id():
    rows = [ClusterAssignment("b", 0, 0.9), ClusterAssignment("a", 0, 0.9),
            ClusterAssignment("z", 0, 1.0)] + \
        [ClusterAssignment(f"m{i}", 0, 0.1) for i in range(12)]
    table = topic_table(rows, {0: "t"}, {})
    exemplars = table[0].exemplar_comment_ids
    assert exemplars[:3] == ["z", "a", "b"]
    assert len(exemplars) == 10  # capped
