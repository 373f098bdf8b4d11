"""Per-stage timing capture with min/max/avg summaries."""

from __future__ import annotations

import statistics
import threading
from collections import deque
from dataclasses import dataclass

STAGES: tuple[str, ...] = ("decode", "detect", "classify", "aggregate", "retrieve_song")

DEFAULT_CAPACITY = 10_000


class NoSamples(Exception):
    """No timing sample has been recorded for the requested stage."""


@dataclass(frozen=True)
class TimingSummary:
    stage: str
    count: int
    min_ms: float
    max_ms: float
    avg_ms: float

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError("summary requires at least one sample")
        if not self.min_ms <= self.avg_ms <= self.max_ms:
            raise ValueError(
                f"inconsistent summary: min={self.min_ms} avg={self.avg_ms} max={self.max_ms}"
            )

    def to_doc(self) -> dict:
        return {
            "stage": self.stage,
            "count": self.count,
            "min_ms": self.min_ms,
            "max_ms": self.max_ms,
            "avg_ms": self.avg_ms,
        }


class MetricsRegistry:
    """Bounded per-stage sample buffers, safe for concurrent recorders.

    Each stage keeps the most recent ``capacity`` samples (oldest evicted).
    Summaries are pure functions of the retained samples.
    """

    def __init__(self, capacity: int = DEFAULT_CAPACITY) -> None:
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self._lock = threading.Lock()
        self._samples: dict[str, deque[float]] = {
            stage: deque(maxlen=capacity) for stage in STAGES
        }

    def record(self, stage: str, elapsed_ms: float) -> None:
        if stage not in self._samples:
            raise ValueError(f"unknown stage {stage!r}; expected one of {STAGES}")
        if elapsed_ms < 0:
            raise ValueError(f"elapsed_ms must be >= 0, got {elapsed_ms}")
        with self._lock:
            self._samples[stage].append(float(elapsed_ms))

    def summarize(self, stage: str) -> TimingSummary:
        if stage not in self._samples:
            raise ValueError(f"unknown stage {stage!r}; expected one of {STAGES}")
        with self._lock:
            retained = list(self._samples[stage])
        if not retained:
            raise NoSamples(f"no samples recorded for stage {stage!r}")
        return TimingSummary(
            stage=stage,
            count=len(retained),
            min_ms=min(retained),
            max_ms=max(retained),
            avg_ms=float(statistics.mean(retained)),
        )

    def summaries(self) -> dict[str, TimingSummary]:
        """Summaries for every stage that has at least one sample."""
        out: dict[str, TimingSummary] = {}
        for stage in STAGES:
            try:
                out[stage] = self.summarize(stage)
            except NoSamples:
                continue
        return out
