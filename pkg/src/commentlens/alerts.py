"""Change alerts: unusual comment volume, unusual sentiment, and elevated
update-request counts, each against a per-video baseline.

The "current" window is the one containing the channel's data horizon (the
newest comment anywhere in the channel), so detection is reproducible on a
static corpus and a video whose commenting died off can still alert low.
"""

from __future__ import annotations

import json
import re
from datetime import datetime

import numpy as np

from .analytics import comment_time_histogram
from .config import AlertsConfig, AppConfig
from .models import Alert
from .store import Store
from .utils import bucket_start, from_epoch, month_start

_EPS = 1e-9


def exp_smoothing_baseline(series: list[float], alpha: float) -> float:
    """Simple exponential smoothing level after the last observation.

    s_1 = x_1, s_t = alpha * x_t + (1 - alpha) * s_{t-1}; returns s_T.
    Computed in closed form as a weighted sum (tests check it against the
    direct recursion).
    """
    if not series:
        raise ValueError("series must be non-empty")
    if not 0 < alpha <= 1:
        raise ValueError("alpha must be in (0, 1]")
    x = np.asarray(series, dtype=np.float64)
    t = len(x)
    powers = np.power(1.0 - alpha, np.arange(t - 1, -1, -1, dtype=np.float64))
    weights = alpha * powers
    weights[0] = powers[0]  # the first observation seeds the level
    return float(weights @ x)


def channel_data_horizon(store: Store) -> datetime | None:
    bounds = store.comment_time_bounds()
    return bounds[1] if bounds else None


def detect_volume_alerts(store: Store, video_id: str, cfg: AlertsConfig,
                         horizon: datetime) -> list[Alert]:
    """Flag the current window's comment count against the smoothed history.

    High fires when observed > high_ratio * max(baseline, min_baseline); low
    fires when observed < low_ratio * baseline with baseline at least
    min_baseline. Fewer than 2 windows means no detection is possible.
    """
    series = comment_time_histogram(store, video_id, cfg.window,
                                    extend_to=horizon)
    if len(series) < 2:
        return []
    history = [float(count) for _, count in series[:-1]]
    window_start, observed = series[-1]
    observed = float(observed)
    baseline = exp_smoothing_baseline(history, cfg.alpha)
    deviation = observed / max(baseline, _EPS)
    alerts = []
    if observed > cfg.volume_high_ratio * max(baseline, cfg.volume_min_baseline):
        alerts.append(Alert("volume_high", video_id, window_start,
                            observed, baseline, deviation))
    elif observed < cfg.volume_low_ratio * baseline and \
            baseline >= cfg.volume_min_baseline:
        alerts.append(Alert("volume_low", video_id, window_start,
                            observed, baseline, deviation))
    return alerts


def monthly_weighted_sentiment_baseline(store: Store, video_id: str,
                                        current_window_start: datetime) -> float | None:
    """Comment-count-weighted mean of monthly sentiment means over all months
    strictly before the month containing the current window; None if none."""
    from .sentiment import monthly_sentiment_series
    cutoff = month_start(current_window_start)
    total = 0.0
    weight = 0
    for entry in monthly_sentiment_series(store, video_id):
        year, month = (int(p) for p in entry["month"].split("-"))
        m_start = datetime(year, month, 1, tzinfo=cutoff.tzinfo)
        if m_start < cutoff:
            total += entry["mean"] * entry["count"]
            weight += entry["count"]
    return total / weight if weight else None


def detect_sentiment_alerts(store: Store, video_id: str, cfg: AlertsConfig,
                            horizon: datetime) -> list[Alert]:
    """Compare the current window's mean scalar against the monthly weighted
    baseline; requires sentiment_min_comments comments in the window."""
    window_start = bucket_start(horizon, cfg.window)
    start_ts = window_start.timestamp()
    current = [s for _, ts, s in store.scalars_for_video(video_id)
               if ts >= start_ts]
    if len(current) < cfg.sentiment_min_comments:
        return []
    baseline = monthly_weighted_sentiment_baseline(store, video_id, window_start)
    if baseline is None:
        return []
    observed = sum(current) / len(current)
    delta = observed - baseline
    if delta > cfg.sentiment_delta_threshold:
        return [Alert("sentiment_positive", video_id, window_start,
                      observed, baseline, delta)]
    if delta < -cfg.sentiment_delta_threshold:
        return [Alert("sentiment_negative", video_id, window_start,
                      observed, baseline, delta)]
    return []


class UpdateRequestMatcher:
    """Pattern matcher for comments asking for an updated/follow-up video.

    Fires when a request pattern and a follow-up topic pattern co-occur, or
    when a standalone phrasing (already a request by itself) appears.
    """

    def __init__(self, patterns_path: str):
        with open(patterns_path, encoding="utf-8") as fh:
            data = json.load(fh)
        self.version = data.get("version", 0)
        self._request = [re.compile(p, re.IGNORECASE)
                         for p in data["request_patterns"]]
        self._followup = [re.compile(p, re.IGNORECASE)
                          for p in data["followup_patterns"]]
        self._standalone = [re.compile(p, re.IGNORECASE)
                            for p in data.get("standalone_patterns", [])]

    def matches(self, text: str) -> bool:
        if any(p.search(text) for p in self._standalone):
            return True
        return any(p.search(text) for p in self._request) and \
            any(p.search(text) for p in self._followup)


def detect_update_requests(store: Store, video_id: str, cfg: AlertsConfig,
                           matcher: UpdateRequestMatcher) -> Alert | None:
    """Count update-request comments over the whole video against the fixed
    baseline of zero; alert when the count reaches update_request_min."""
    supporting = [c.comment_id for c in store.iter_comments(video_id)
                  if matcher.matches(c.text)]
    if len(supporting) < cfg.update_request_min:
        return None
    return Alert("update_requests", video_id, None,
                 observed=float(len(supporting)), baseline=0.0,
                 deviation=float(len(supporting)),
                 supporting_comment_ids=supporting)


def run_alerts(store: Store, cfg: AppConfig) -> list[dict]:
    """All alert kinds over all videos, as the channel-scope artifact list."""
    horizon = channel_data_horizon(store)
    if horizon is None:
        return []
    matcher = UpdateRequestMatcher(cfg.alerts.resolved_patterns_path())
    alerts: list[Alert] = []
    for video_id in store.video_ids():
        alerts.extend(detect_volume_alerts(store, video_id, cfg.alerts, horizon))
        alerts.extend(detect_sentiment_alerts(store, video_id, cfg.alerts, horizon))
        update = detect_update_requests(store, video_id, cfg.alerts, matcher)
        if update:
            alerts.append(update)
    alerts.sort(key=lambda a: (a.video_id, a.kind))
    return [a.to_dict() for a in alerts]
