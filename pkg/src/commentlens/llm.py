"""LLM clients: an OpenAI-compatible chat-completions client for production
and a deterministic stub for tests and offline demos."""

from __future__ import annotations

import json
import os
import re
import time
from collections import Counter
from typing import Protocol

import httpx

from .config import AppConfig
from .errors import ModelUnavailableError
from .textutil import default_stopwords, tokenize

_PROMPT_COMMENT_RE = re.compile(r"^\[(\d+)\]\s(.*)$", re.MULTILINE)


class LLMClient(Protocol):
    model_id: str

    def complete(self, prompt: str) -> str: ...


class OpenAICompatLLM:
    """Minimal chat-completions client (OpenAI wire format).

    The API key comes from the configured environment variable; retries with
    exponential backoff on 429 and 5xx responses.
    """

    def __init__(self, model_id: str, endpoint: str, api_key_env: str,
                 temperature: float = 0.0, timeout: float = 60.0,
                 max_retries: int = 2):
        self.model_id = model_id
        self.endpoint = endpoint.rstrip("/")
        self.temperature = temperature
        self.max_retries = max_retries
        api_key = os.environ.get(api_key_env, "")
        if not api_key:
            raise ModelUnavailableError(
                f"LLM API key not set in environment variable {api_key_env}")
        self._client = httpx.Client(
            timeout=timeout,
            headers={"Authorization": f"Bearer {api_key}"})

    def complete(self, prompt: str) -> str:
        payload = {
            "model": self.model_id,
            "temperature": self.temperature,
            "messages": [{"role": "user", "content": prompt}],
        }
        delay = 1.0
        for attempt in range(self.max_retries + 1):
            try:
                resp = self._client.post(
                    f"{self.endpoint}/chat/completions", json=payload)
            except httpx.HTTPError as exc:
                if attempt == self.max_retries:
                    raise ModelUnavailableError(f"LLM request failed: {exc}") from exc
                time.sleep(delay)
                delay *= 2
                continue
            if resp.status_code == 200:
                body = resp.json()
                return body["choices"][0]["message"]["content"]
            if resp.status_code in (429, 500, 502, 503) and attempt < self.max_retries:
                time.sleep(delay)
                delay *= 2
                continue
            raise ModelUnavailableError(
                f"LLM endpoint returned {resp.status_code}: {resp.text[:200]}")
        raise ModelUnavailableError("LLM retries exhausted")


def extract_numbered_comments(prompt: str) -> list[str]:
    """Pull the '[i] text' lines out of a rendered prompt."""
    return [m.group(2) for m in _PROMPT_COMMENT_RE.finditer(prompt)]


class StubLLM:
    """Deterministic canned-response model for tests and the offline demo.

    Inspects the rendered prompt: labeling prompts get a short topic label
    derived from the most distinctive tokens; theme/suggestion prompts get a
    structured JSON answer whose cited excerpts are verbatim substrings of
    the listed comments, so citation grounding resolves them exactly.
    """

    def __init__(self):
        self.model_id = "stub-llm"
        self.calls: list[str] = []
        self._stopwords = default_stopwords()

    def _top_tokens(self, texts: list[str], k: int) -> list[str]:
        counts: Counter = Counter()
        for text in texts:
            counts.update(t for t in tokenize(text)
                          if len(t) >= 3 and t not in self._stopwords)
        ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return [t for t, _ in ranked[:k]]

    @staticmethod
    def _excerpt(text: str) -> str:
        clipped = text[:80].strip()
        return clipped

    def complete(self, prompt: str) -> str:
        comments = extract_numbered_comments(prompt)
        if "short descriptive label" in prompt:
            self.calls.append("label")
            tokens = self._top_tokens(comments, 2)
            label = " ".join(t.capitalize() for t in tokens) or "General Discussion"
            return label
        kind = "suggestions" if "new documentary content" in prompt else "themes"
        self.calls.append(kind)
        tokens = self._top_tokens(comments, 3) or ["comments"]
        items = []
        for i, token in enumerate(tokens):
            matching = [c for c in comments if token in tokenize(c)] or comments
            cited = [self._excerpt(c) for c in matching[:2]]
            if kind == "themes":
                title = f"Theme {i + 1}: {token}"
                description = (f"Many commenters bring up {token} when "
                               "discussing the video.")
            else:
                title = f"Suggestion {i + 1}: more on {token}"
                description = (f"Audience interest in {token} suggests a "
                               "follow-up piece.")
            items.append({"title": title, "description": description,
                          "cited_excerpts": cited})
        return json.dumps({"items": items})


class ScriptedLLM:
    """Test helper: replays a fixed list of responses."""

    def __init__(self, responses: list[str], model_id: str = "scripted-llm"):
        self.model_id = model_id
        self.responses = list(responses)
        self.calls: list[str] = []

    def complete(self, prompt: str) -> str:
        self.calls.append(prompt)
        if not self.responses:
            raise ModelUnavailableError("scripted LLM ran out of responses")
        return self.responses.pop(0)


def get_llm(cfg: AppConfig) -> LLMClient:
    if cfg.llm.provider == "stub":
        return StubLLM()
    return OpenAICompatLLM(
        model_id=cfg.llm.model_id, endpoint=cfg.llm.endpoint,
        api_key_env=cfg.llm.api_key_env, temperature=cfg.llm.temperature,
        timeout=cfg.llm.timeout_seconds, max_retries=cfg.llm.max_retries)
