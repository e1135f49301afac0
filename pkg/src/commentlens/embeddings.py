"""Sentence embedding plugins: deterministic hashing stub and an adapter for
sentence-transformers models. Rows are L2-normalized."""

from __future__ import annotations

import hashlib
from typing import Protocol

import numpy as np

from .config import AppConfig
from .errors import ModelUnavailableError


class Embedder(Protocol):
    model_id: str

    def embed(self, texts: list[str]) -> np.ndarray: ...


class HashEmbedder:
    """Hashed bag-of-words embedding, deterministic across runs and platforms.

    Each casefolded token is hashed (blake2b) to a dimension and a sign, so
    texts sharing vocabulary land near each other. Good enough for tests and
    demo topic discovery; not a semantic model.
    """

    def __init__(self, dim: int = 32):
        self.dim = dim
        self.model_id = f"hash-stub-{dim}"
        self._cache: dict[str, tuple[int, float]] = {}

    def _slot(self, token: str) -> tuple[int, float]:
        hit = self._cache.get(token)
        if hit is None:
            digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
            value = int.from_bytes(digest, "little")
            hit = (value % self.dim, 1.0 if (value >> 32) & 1 else -1.0)
            if len(self._cache) < 200_000:
                self._cache[token] = hit
        return hit

    def embed(self, texts: list[str]) -> np.ndarray:
        out = np.zeros((len(texts), self.dim), dtype=np.float64)
        for i, text in enumerate(texts):
            for token in text.casefold().split():
                j, sign = self._slot(token)
                out[i, j] += sign
        norms = np.linalg.norm(out, axis=1)
        zero = norms == 0
        if zero.any():
            out[zero, 0] = 1.0
            norms[zero] = 1.0
        return out / norms[:, None]


class SentenceTransformersEmbedder:
    """Adapter for sentence-transformers models (loaded lazily)."""

    def __init__(self, model_id: str):
        self.model_id = model_id
        try:
            from sentence_transformers import SentenceTransformer
            self._model = SentenceTransformer(model_id)
        except Exception as exc:
            raise ModelUnavailableError(
                f"embedding model {model_id!r} unavailable: {exc}") from exc

    def embed(self, texts: list[str]) -> np.ndarray:
        vecs = self._model.encode(texts, normalize_embeddings=True,
                                  show_progress_bar=False)
        return np.asarray(vecs, dtype=np.float64)


def get_embedder(cfg: AppConfig) -> Embedder:
    if cfg.embedding.model_id == "hash-stub":
        return HashEmbedder(cfg.embedding.dim)
    return SentenceTransformersEmbedder(cfg.embedding.model_id)
