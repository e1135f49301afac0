"""LLM themes and content suggestions with citation grounding.

Every excerpt the model cites is resolved back to a stored comment: exact
normalized-substring matches first, then best edit-distance candidate from
the sample, with unmatched as an explicit, surfaced outcome.
"""

from __future__ import annotations

import json
import logging
import random
import re
from datetime import datetime

from .config import AppConfig
from .errors import LLMOutputError
from .llm import LLMClient
from .models import (CHANNEL_SCOPE, CitationMatch, CommentRecord,
                     CommentSample, Theme, ThemeReport)
from .store import Store
from .textutil import normalize_comment, normalize_excerpt, substring_similarity
from .utils import sha256_text

log = logging.getLogger(__name__)

_FORMAT_INSTRUCTIONS = (
    'Respond with JSON only, in this exact shape: {"items": [{"title": "...", '
    '"description": "...", "cited_excerpts": ["...", "..."]}]}. '
    "Each cited excerpt must be quoted verbatim from one of the comments above."
)
_REASK_REMINDER = (
    "Your previous reply could not be parsed. Reply again with ONLY the JSON "
    "object in the requested shape, with no surrounding prose or code fences."
)
_JSON_BLOCK_RE = re.compile(r"\{.*\}", re.DOTALL)


def derive_seed(root_seed: int, *parts: str) -> int:
    """Stable per-scope seed so different scopes draw independent samples."""
    digest = sha256_text(f"{root_seed}|" + "|".join(parts))
    return int(digest[:16], 16)


def sample_comments(store: Store, scope: str, n: int = 100,
                    seed: int = 0) -> CommentSample:
    """Uniform sample without replacement; the full population (in stored
    order) when the scope has fewer than n comments."""
    video_id = None if scope == CHANNEL_SCOPE else scope
    ids = [c.comment_id for c in store.iter_comments(video_id)]
    if not ids:
        raise ValueError(f"scope {scope!r} has no comments")
    if len(ids) <= n:
        chosen = list(ids)
    else:
        rng = random.Random(seed)
        chosen = rng.sample(ids, n)
    return CommentSample(scope=scope, comment_ids=tuple(chosen),
                         sample_size_requested=n, seed=seed)


def build_prompt(template: str, comments: list[CommentRecord], org_name: str,
                 max_comment_chars: int, max_prompt_chars: int) -> str:
    """Render the template with numbered one-per-line comments.

    If the rendered prompt exceeds the budget, comments are truncated
    individually first; only then are trailing comments dropped (logged).
    """
    def render(texts: list[str]) -> str:
        lines = "\n".join(f"[{i + 1}] {t}" for i, t in enumerate(texts))
        return template.format(comments=lines, org_name=org_name,
                               n_comments=len(texts)) + "\n\n" + _FORMAT_INSTRUCTIONS

    texts = [" ".join(c.text.split()) for c in comments]
    prompt = render(texts)
    if len(prompt) > max_prompt_chars:
        texts = [t[:max_comment_chars] for t in texts]
        prompt = render(texts)
    dropped = 0
    while len(prompt) > max_prompt_chars and len(texts) > 1:
        texts = texts[:-1]
        dropped += 1
        prompt = render(texts)
    if dropped:
        log.warning("prompt budget dropped %d of %d sampled comments",
                    dropped, len(comments))
    return prompt


def parse_structured(text: str) -> list[dict]:
    """Parse the model's structured reply; raises LLMOutputError when the
    shape is wrong."""
    candidate = text.strip()
    if candidate.startswith("```"):
        candidate = candidate.strip("`")
        if candidate.startswith("json"):
            candidate = candidate[4:]
    try:
        data = json.loads(candidate)
    except json.JSONDecodeError:
        match = _JSON_BLOCK_RE.search(text)
        if not match:
            raise LLMOutputError("no JSON object in model reply")
        try:
            data = json.loads(match.group(0))
        except json.JSONDecodeError as exc:
            raise LLMOutputError(f"unparseable JSON in model reply: {exc}") from exc
    items = data.get("items") if isinstance(data, dict) else None
    if not isinstance(items, list) or not items:
        raise LLMOutputError("model reply has no items list")
    out = []
    for i, item in enumerate(items):
        if not isinstance(item, dict) or not str(item.get("title", "")).strip():
            raise LLMOutputError(f"item {i} missing a title")
        excerpts = item.get("cited_excerpts", [])
        if not isinstance(excerpts, list):
            raise LLMOutputError(f"item {i} cited_excerpts is not a list")
        out.append({
            "title": str(item["title"]).strip(),
            "description": str(item.get("description", "")).strip(),
            "cited_excerpts": [str(e) for e in excerpts],
        })
    return out


def ground_citation(excerpt: str, candidates: list[CommentRecord],
                    fuzzy_threshold: float = 0.8,
                    min_fuzzy_chars: int = 15,
                    fallback: list[CommentRecord] | None = None) -> CitationMatch:
    """Resolve one cited excerpt to a stored comment.

    Exact: the normalized excerpt is a substring of a candidate. Fuzzy: best
    normalized edit-distance similarity >= threshold (excerpts shorter than
    min_fuzzy_chars match only exactly). The fallback set (full scope) is
    searched for exact matches only.
    """
    needle = normalize_excerpt(excerpt)
    if not needle:
        return CitationMatch(excerpt, None, 0.0, "unmatched")
    for comment in candidates:
        if needle in normalize_comment(comment.text):
            return CitationMatch(excerpt, comment.comment_id, 1.0, "exact")
    if fallback:
        for comment in fallback:
            if needle in normalize_comment(comment.text):
                return CitationMatch(excerpt, comment.comment_id, 1.0, "exact")
    if len(needle) < min_fuzzy_chars:
        return CitationMatch(excerpt, None, 0.0, "unmatched")
    best_id = None
    best_sim = -1.0
    for comment in candidates:
        sim = substring_similarity(needle, normalize_comment(comment.text))
        if sim > best_sim or (sim == best_sim and best_id is not None
                              and comment.comment_id < best_id):
            best_sim = sim
            best_id = comment.comment_id
    if best_id is not None and best_sim >= fuzzy_threshold:
        return CitationMatch(excerpt, best_id, best_sim, "fuzzy")
    return CitationMatch(excerpt, None, max(best_sim, 0.0), "unmatched")


def generate_report(store: Store, llm: LLMClient, cfg: AppConfig, scope: str,
                    kind: str, seed: int, generated_at: datetime) -> ThemeReport:
    """Generate one themes/suggestions report for a scope.

    Malformed structured output gets one re-ask with a format reminder; a
    second failure raises LLMOutputError (callers degrade the scope and move
    on)."""
    assert kind in ("themes", "suggestions")
    sample_seed = derive_seed(seed, scope, kind)
    sample = sample_comments(store, scope, cfg.themes.sample_size, sample_seed)
    comments = store.comments_by_ids(list(sample.comment_ids))
    template = cfg.themes.prompt_text(kind)
    prompt = build_prompt(template, comments, cfg.org_name,
                          cfg.themes.max_comment_chars,
                          cfg.themes.max_prompt_chars)
    try:
        raw_items = parse_structured(llm.complete(prompt))
    except LLMOutputError:
        raw_items = parse_structured(
            llm.complete(prompt + "\n\n" + _REASK_REMINDER))
    fallback: list[CommentRecord] | None = None

    def ground(excerpt: str) -> CitationMatch:
        nonlocal fallback
        match = ground_citation(excerpt, comments, cfg.themes.fuzzy_threshold,
                                cfg.themes.min_fuzzy_excerpt_chars)
        if match.status != "unmatched":
            return match
        # the model only saw the sample; the full scope is an exact-match
        # fallback, loaded once and only when something failed to resolve
        if fallback is None:
            video_id = None if scope == CHANNEL_SCOPE else scope
            fallback = list(store.iter_comments(video_id))
        return ground_citation(excerpt, comments, cfg.themes.fuzzy_threshold,
                               cfg.themes.min_fuzzy_excerpt_chars, fallback)

    items = []
    for raw in raw_items:
        citations = [ground(e) for e in raw["cited_excerpts"]]
        items.append(Theme(title=raw["title"], description=raw["description"],
                           citations=citations))
    _hydrate_citations(store, items)
    return ThemeReport(
        scope=scope, kind=kind, items=items, sample=sample,
        model_id=llm.model_id, prompt_digest=sha256_text(template),
        generated_at=generated_at)


def _hydrate_citations(store: Store, items: list[Theme]) -> None:
    """Attach the matched comments' text/author so report consumers can show
    full citations without another lookup."""
    import dataclasses

    ids = [c.matched_comment_id for theme in items for c in theme.citations
           if c.matched_comment_id]
    resolved = {c.comment_id: c for c in store.comments_by_ids(ids)}
    for theme in items:
        theme.citations = [
            dataclasses.replace(
                c, matched_text=resolved[c.matched_comment_id].text,
                matched_author=resolved[c.matched_comment_id].author_display)
            if c.matched_comment_id in resolved else c
            for c in theme.citations]
