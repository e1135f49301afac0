"""Three-class comment sentiment: pluggable classifiers, scalar mapping,
per-scope and per-month aggregation.

The scalar for a (p_neg, p_neu, p_pos) distribution is p_pos - p_neg, a
symmetric value in [-1, 1] where neutral mass pulls averages toward 0.
"""

from __future__ import annotations

import json
from typing import Protocol

from .config import AppConfig, data_file
from .errors import ModelUnavailableError
from .models import CHANNEL_SCOPE, ScoredComment, SentimentTriple
from .store import Store
from .textutil import tokenize
from .utils import from_epoch, month_key


class SentimentClassifier(Protocol):
    model_id: str

    def classify(self, texts: list[str]) -> list[SentimentTriple]: ...


class LexiconStubClassifier:
    """Deterministic test/demo classifier.

    One-hot by the sign of (positive-word count - negative-word count),
    neutral on a tie. The lexicon ships as a versioned JSON file.
    """

    def __init__(self, lexicon_path: str | None = None):
        path = lexicon_path or data_file("sentiment_lexicon.json")
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        self.positive = frozenset(w.casefold() for w in data["positive"])
        self.negative = frozenset(w.casefold() for w in data["negative"])
        self.model_id = f"lexicon-stub-v{data['version']}"

    def classify(self, texts: list[str]) -> list[SentimentTriple]:
        out = []
        for text in texts:
            tokens = tokenize(text)
            score = sum(t in self.positive for t in tokens) \
                - sum(t in self.negative for t in tokens)
            if score > 0:
                out.append(SentimentTriple(0.0, 0.0, 1.0))
            elif score < 0:
                out.append(SentimentTriple(1.0, 0.0, 0.0))
            else:
                out.append(SentimentTriple(0.0, 1.0, 0.0))
        return out


class TransformersClassifier:
    """Adapter for a local transformer sentiment head with a neg/neu/pos output.

    Loaded lazily; raises ModelUnavailableError when the model cannot be
    loaded (missing package, missing weights, offline host).
    """

    def __init__(self, model_id: str, max_tokens: int = 512):
        self.model_id = model_id
        self.max_tokens = max_tokens
        try:
            from transformers import (AutoModelForSequenceClassification,
                                      AutoTokenizer)
            import torch  # noqa: F401
            self._tokenizer = AutoTokenizer.from_pretrained(model_id)
            self._model = AutoModelForSequenceClassification.from_pretrained(model_id)
            self._model.eval()
        except Exception as exc:
            raise ModelUnavailableError(
                f"sentiment model {model_id!r} unavailable: {exc}") from exc

    def classify(self, texts: list[str]) -> list[SentimentTriple]:
        import torch
        enc = self._tokenizer(texts, truncation=True, max_length=self.max_tokens,
                              padding=True, return_tensors="pt")
        with torch.no_grad():
            probs = torch.softmax(self._model(**enc).logits, dim=-1)
        return [SentimentTriple(float(p[0]), float(p[1]), float(p[2]))
                for p in probs]


def get_classifier(cfg: AppConfig) -> SentimentClassifier:
    if cfg.sentiment.model_id == "lexicon-stub":
        return LexiconStubClassifier(cfg.sentiment.lexicon_path)
    return TransformersClassifier(cfg.sentiment.model_id, cfg.sentiment.max_tokens)


def classify_batch(classifier: SentimentClassifier, texts: list[str],
                   max_batch: int = 512) -> list[SentimentTriple]:
    """Order-preserving classification of one batch of non-empty texts."""
    if len(texts) > max_batch:
        raise ValueError(f"batch of {len(texts)} exceeds max {max_batch}")
    for i, text in enumerate(texts):
        if not text.strip():
            raise ValueError(f"text {i} is empty")
    return classifier.classify(texts)


def to_scalar(triple: SentimentTriple) -> float:
    return triple.p_pos - triple.p_neg


def score_comments(store: Store, classifier: SentimentClassifier,
                   batch_size: int = 64, max_batch: int = 512) -> int:
    """Score every not-yet-scored comment; returns the number scored."""
    scored = 0
    batch = []
    for comment in store.iter_unscored_comments(classifier.model_id):
        batch.append(comment)
        if len(batch) >= batch_size:
            scored += _flush(store, classifier, batch, max_batch)
            batch = []
    scored += _flush(store, classifier, batch, max_batch)
    return scored


def _flush(store: Store, classifier: SentimentClassifier, batch: list,
           max_batch: int) -> int:
    if not batch:
        return 0
    triples = classify_batch(classifier, [c.text for c in batch], max_batch)
    store.put_sentiment([
        ScoredComment(c.comment_id, t, to_scalar(t), classifier.model_id)
        for c, t in zip(batch, triples)])
    return len(batch)


def mean_sentiment(store: Store, scope: str,
                   max_rowid: int | None = None) -> float | None:
    """Arithmetic mean scalar over the scope; None when the scope is empty."""
    if scope == CHANNEL_SCOPE:
        total = 0.0
        count = 0
        for vid in store.video_ids():
            for _, _, scalar in store.scalars_for_video(vid, max_rowid):
                total += scalar
                count += 1
        return total / count if count else None
    rows = store.scalars_for_video(scope, max_rowid)
    if not rows:
        return None
    return sum(s for _, _, s in rows) / len(rows)


def monthly_sentiment_series(store: Store, video_id: str,
                             max_rowid: int | None = None) -> list[dict]:
    """Chronological per-calendar-month (UTC) means; months with no comments
    are omitted. Counts sum to the video's scored-comment total."""
    sums: dict[str, float] = {}
    counts: dict[str, int] = {}
    for _, ts, scalar in store.scalars_for_video(video_id, max_rowid):
        key = month_key(from_epoch(ts))
        sums[key] = sums.get(key, 0.0) + scalar
        counts[key] = counts.get(key, 0) + 1
    return [{"month": m, "mean": sums[m] / counts[m], "count": counts[m]}
            for m in sorted(sums)]
