"""Tokenization, stopwords, text normalization, and approximate matching."""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

import numpy as np

WORD_RE = re.compile(r"\w+", re.UNICODE)
WS_RE = re.compile(r"\s+")
# quote marks and ellipses commonly wrapped around LLM-cited excerpts
_STRIP_CHARS = "\"'`“”‘’«»"
_ELLIPSIS_RE = re.compile(r"^(\.{2,}|…)+|(\.{2,}|…)+$")


def tokenize(text: str) -> list[str]:
    return [t.casefold() for t in WORD_RE.findall(text)]


def load_stopwords(path=None) -> frozenset[str]:
    """One term per line; '#' starts a comment. Defaults to the shipped list."""
    if path is None:
        text = resources.files("commentlens.data").joinpath("stopwords.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    words = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            words.add(line.casefold())
    return frozenset(words)


@lru_cache(maxsize=4)
def default_stopwords() -> frozenset[str]:
    return load_stopwords()


def content_terms(text: str, stopwords: frozenset[str]) -> list[str]:
    """Word-cloud tokens: casefolded, length >= 3, stopwords removed."""
    return [t for t in tokenize(text) if len(t) >= 3 and t not in stopwords]


def collapse_ws(text: str) -> str:
    return WS_RE.sub(" ", text).strip()


def normalize_comment(text: str) -> str:
    return collapse_ws(text.casefold())


def normalize_excerpt(text: str) -> str:
    text = text.strip().strip(_STRIP_CHARS).strip()
    text = _ELLIPSIS_RE.sub("", text).strip()
    return collapse_ws(text.casefold())


def substring_edit_distance(needle: str, haystack: str) -> int:
    """Minimum Levenshtein distance between needle and any substring of haystack.

    Standard approximate-matching DP: the first row is zero (a match may start
    anywhere) and the result is the minimum of the last row (it may end
    anywhere). Unit costs for insert, delete, substitute.
    """
    n, m = len(needle), len(haystack)
    if n == 0:
        return 0
    if m == 0:
        return n
    prev = np.zeros(m + 1, dtype=np.int64)
    hay = np.frombuffer(haystack.encode("utf-32-le"), dtype=np.uint32)
    offsets = np.arange(m + 1, dtype=np.int64)
    for i, ch in enumerate(needle):
        code = ord(ch)
        sub = prev[:-1] + (hay != code)
        cand = np.minimum(prev[1:] + 1, sub)
        cand = np.concatenate(([i + 1], cand))
        # resolve the left-neighbor dependency: cur[j] = min_k<=j (cand[k] + j - k)
        cur = np.minimum.accumulate(cand - offsets) + offsets
        prev = cur
    return int(prev.min())


def substring_similarity(needle: str, haystack: str) -> float:
    """1 - edit_distance/len(needle), clipped to [0, 1]."""
    if not needle:
        return 0.0
    dist = substring_edit_distance(needle, haystack)
    return max(0.0, 1.0 - dist / len(needle))
