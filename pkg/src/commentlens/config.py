"""Configuration: dataclasses, YAML loading, validation, artifact digests.

Every parameter that influences a computed artifact feeds that artifact
kind's config digest, so changing a prompt, model id, seed, or threshold
invalidates exactly the affected cache entries.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from importlib import resources

import yaml

from .errors import ConfigError
from .utils import digest_params, sha256_text


def data_file(name: str) -> str:
    return str(resources.files("commentlens.data").joinpath(name))


@dataclass
class IngestConfig:
    api_key_env: str = "YOUTUBE_API_KEY"
    page_size: int = 50
    comment_page_size: int = 100
    requests_per_minute: int = 120
    max_retries: int = 5
    concurrency: int = 1
    sync_overlap_hours: int = 24


@dataclass
class SentimentConfig:
    model_id: str = "lexicon-stub"
    lexicon_path: str | None = None
    batch_size: int = 64
    max_batch_size: int = 512
    max_tokens: int = 512  # classifier input truncation (head)


@dataclass
class EmbeddingConfig:
    model_id: str = "hash-stub"
    dim: int = 32  # stub embedder only; real models fix their own width
    batch_size: int = 256


@dataclass
class TopicsConfig:
    target_dim: int = 5
    n_neighbors: int = 15
    min_cluster_size: int = 15
    sample_per_cluster: int = 30
    max_label_words: int = 12
    n_epochs: int | None = None  # None = auto by corpus size
    per_video: bool = False


@dataclass
class ThemesConfig:
    sample_size: int = 100
    fuzzy_threshold: float = 0.8
    min_fuzzy_excerpt_chars: int = 15
    max_comment_chars: int = 400
    max_prompt_chars: int = 60000
    themes_prompt_path: str | None = None
    suggestions_prompt_path: str | None = None
    label_prompt_path: str | None = None
    max_parallel_requests: int = 4

    def prompt_path(self, kind: str) -> str:
        if kind == "themes":
            return self.themes_prompt_path or data_file("prompts/themes.txt")
        if kind == "suggestions":
            return self.suggestions_prompt_path or data_file("prompts/suggestions.txt")
        if kind == "label":
            return self.label_prompt_path or data_file("prompts/cluster_label.txt")
        raise ValueError(f"unknown prompt kind {kind!r}")

    def prompt_text(self, kind: str) -> str:
        with open(self.prompt_path(kind), encoding="utf-8") as fh:
            return fh.read()


@dataclass
class LLMConfig:
    provider: str = "stub"  # stub | openai
    model_id: str = "gpt-4"
    endpoint: str = "https://api.openai.com/v1"
    api_key_env: str = "OPENAI_API_KEY"
    temperature: float = 0.0
    max_retries: int = 2
    timeout_seconds: float = 60.0


@dataclass
class AlertsConfig:
    alpha: float = 0.3
    volume_high_ratio: float = 3.0
    volume_low_ratio: float = 1.0 / 3.0
    volume_min_baseline: float = 2.0
    sentiment_delta_threshold: float = 0.3
    sentiment_min_comments: int = 20
    update_request_min: int = 5
    window: str = "week"  # week | month
    patterns_path: str | None = None

    def resolved_patterns_path(self) -> str:
        return self.patterns_path or data_file("update_request_patterns.json")


@dataclass
class SuperfanConfig:
    min_comments: int = 200
    top_n: int = 20
    include_replies: bool = True


@dataclass
class ServerConfig:
    host: str = "127.0.0.1"
    port: int = 8321
    cors_origins: list[str] = field(default_factory=lambda: ["*"])


@dataclass
class AppConfig:
    db_path: str = "commentlens.db"
    channel_id: str = ""
    org_name: str = "the newsroom"
    seed: int = 0
    wordcloud_k: int = 100
    stopwords_path: str | None = None
    extra_stopwords: list[str] = field(default_factory=list)
    ingest: IngestConfig = field(default_factory=IngestConfig)
    sentiment: SentimentConfig = field(default_factory=SentimentConfig)
    embedding: EmbeddingConfig = field(default_factory=EmbeddingConfig)
    topics: TopicsConfig = field(default_factory=TopicsConfig)
    themes: ThemesConfig = field(default_factory=ThemesConfig)
    llm: LLMConfig = field(default_factory=LLMConfig)
    alerts: AlertsConfig = field(default_factory=AlertsConfig)
    superfan: SuperfanConfig = field(default_factory=SuperfanConfig)
    server: ServerConfig = field(default_factory=ServerConfig)

    # ---- digests -------------------------------------------------------

    def _file_digest(self, path: str) -> str:
        with open(path, encoding="utf-8") as fh:
            return sha256_text(fh.read())

    def artifact_digest(self, kind: str, seed: int | None = None) -> str:
        """Digest of every parameter that influences artifacts of this kind."""
        seed = self.seed if seed is None else seed
        sent = {"model_id": self.sentiment.model_id,
                "max_tokens": self.sentiment.max_tokens}
        if self.sentiment.model_id == "lexicon-stub":
            sent["lexicon"] = self._file_digest(
                self.sentiment.lexicon_path or data_file("sentiment_lexicon.json"))
        if kind == "sentiment":
            params = sent
        elif kind == "stats":
            params = {"sentiment": sent}
        elif kind == "wordcloud":
            params = {
                "sentiment": sent,
                "k": self.wordcloud_k,
                "stopwords": self._stopwords_digest(),
            }
        elif kind == "superfans":
            params = {
                "sentiment": sent,
                "min_comments": self.superfan.min_comments,
                "top_n": self.superfan.top_n,
                "include_replies": self.superfan.include_replies,
            }
        elif kind == "topics":
            params = {
                "sentiment": sent,
                "embedding_model": self.embedding.model_id,
                "embedding_dim": self.embedding.dim,
                "target_dim": self.topics.target_dim,
                "n_neighbors": self.topics.n_neighbors,
                "min_cluster_size": self.topics.min_cluster_size,
                "sample_per_cluster": self.topics.sample_per_cluster,
                "n_epochs": self.topics.n_epochs,
                "label_prompt": self._file_digest(self.themes.prompt_path("label")),
                "llm_model": self.llm.model_id,
                "seed": seed,
            }
        elif kind in ("themes_video", "themes_channel"):
            params = self._report_digest_params("themes", seed)
        elif kind in ("suggestions_video", "suggestions_channel"):
            params = self._report_digest_params("suggestions", seed)
            params["org_name"] = self.org_name
        elif kind == "alerts":
            a = self.alerts
            params = {
                "sentiment": sent,
                "alpha": a.alpha,
                "volume_high_ratio": a.volume_high_ratio,
                "volume_low_ratio": a.volume_low_ratio,
                "volume_min_baseline": a.volume_min_baseline,
                "sentiment_delta_threshold": a.sentiment_delta_threshold,
                "sentiment_min_comments": a.sentiment_min_comments,
                "update_request_min": a.update_request_min,
                "window": a.window,
                "patterns": self._file_digest(a.resolved_patterns_path()),
            }
        else:
            raise ValueError(f"unknown artifact kind {kind!r}")
        return digest_params({"kind": kind, "params": params})

    def _report_digest_params(self, prompt_kind: str, seed: int) -> dict:
        return {
            "prompt": self._file_digest(self.themes.prompt_path(prompt_kind)),
            "llm_model": self.llm.model_id,
            "sample_size": self.themes.sample_size,
            "seed": seed,
            "fuzzy_threshold": self.themes.fuzzy_threshold,
            "min_fuzzy_excerpt_chars": self.themes.min_fuzzy_excerpt_chars,
            "max_comment_chars": self.themes.max_comment_chars,
        }

    def _stopwords_digest(self) -> str:
        base = self.stopwords_path or data_file("stopwords.txt")
        return digest_params({"file": self._file_digest(base),
                              "extra": sorted(self.extra_stopwords)})


_SECTION_TYPES = {
    "ingest": IngestConfig,
    "sentiment": SentimentConfig,
    "embedding": EmbeddingConfig,
    "topics": TopicsConfig,
    "themes": ThemesConfig,
    "llm": LLMConfig,
    "alerts": AlertsConfig,
    "superfan": SuperfanConfig,
    "server": ServerConfig,
}


def load_config(path: str | None = None) -> AppConfig:
    """Load YAML config; missing file fields keep defaults. Validates afterwards."""
    cfg = AppConfig()
    if path is not None:
        if not os.path.exists(path):
            raise ConfigError(f"config file not found: {path}")
        with open(path, encoding="utf-8") as fh:
            try:
                raw = yaml.safe_load(fh) or {}
            except yaml.YAMLError as exc:
                raise ConfigError(f"config is not valid YAML: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config root must be a mapping")
        for key, value in raw.items():
            if key in _SECTION_TYPES:
                if not isinstance(value, dict):
                    raise ConfigError(f"section {key!r} must be a mapping")
                section = getattr(cfg, key)
                for fname, fval in value.items():
                    if not hasattr(section, fname):
                        raise ConfigError(f"unknown field {key}.{fname}")
                    setattr(section, fname, fval)
            elif hasattr(cfg, key):
                setattr(cfg, key, value)
            else:
                raise ConfigError(f"unknown field {key}")
    validate_config(cfg)
    return cfg


def validate_config(cfg: AppConfig) -> None:
    """Range and enum checks; raises ConfigError naming the offending field."""
    a = cfg.alerts

    def require(cond: bool, fieldname: str, why: str):
        if not cond:
            raise ConfigError(f"field {fieldname}: {why}")

    require(bool(cfg.db_path), "db_path", "must be non-empty")
    require(0 < a.alpha <= 1, "alerts.alpha", "must be in (0, 1]")
    require(a.volume_high_ratio > 1, "alerts.volume_high_ratio", "must be > 1")
    require(0 < a.volume_low_ratio < 1, "alerts.volume_low_ratio", "must be in (0, 1)")
    require(a.volume_min_baseline > 0, "alerts.volume_min_baseline", "must be positive")
    require(a.sentiment_delta_threshold > 0, "alerts.sentiment_delta_threshold", "must be positive")
    require(a.sentiment_min_comments >= 1, "alerts.sentiment_min_comments", "must be >= 1")
    require(a.update_request_min >= 1, "alerts.update_request_min", "must be >= 1")
    require(a.window in ("week", "month"), "alerts.window", "must be 'week' or 'month'")
    require(cfg.topics.target_dim >= 1, "topics.target_dim", "must be >= 1")
    require(cfg.topics.n_neighbors >= 2, "topics.n_neighbors", "must be >= 2")
    require(cfg.topics.min_cluster_size >= 2, "topics.min_cluster_size", "must be >= 2")
    require(cfg.themes.sample_size >= 1, "themes.sample_size", "must be >= 1")
    require(0 < cfg.themes.fuzzy_threshold <= 1, "themes.fuzzy_threshold", "must be in (0, 1]")
    require(cfg.superfan.min_comments >= 1, "superfan.min_comments", "must be >= 1")
    require(cfg.superfan.top_n >= 1, "superfan.top_n", "must be >= 1")
    require(cfg.llm.provider in ("stub", "openai"), "llm.provider", "must be 'stub' or 'openai'")
    require(cfg.sentiment.batch_size >= 1, "sentiment.batch_size", "must be >= 1")
    require(cfg.sentiment.batch_size <= cfg.sentiment.max_batch_size,
            "sentiment.batch_size", "must be <= sentiment.max_batch_size")
    require(cfg.ingest.concurrency >= 1, "ingest.concurrency", "must be >= 1")
