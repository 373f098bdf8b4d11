"""Reduce frame readings to one dominant emotion, plus temporal smoothing.

Two frame-level strategies are available: pick the single strongest confidence
anywhere in the frame, or pick the label that dominates the most faces. For a
single face they coincide. Tie-breaks are fixed so results are deterministic:
face order first, then maximal confidence, then the canonical label order.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from enum import Enum

from .emotions import EMOTION_RANK, EMOTIONS, EmotionDistribution
from .frame_pipeline import FrameReading


class NoFaces(Exception):
    """The frame reading contains no faces; aggregation is undefined."""


class AggregationStrategy(str, Enum):
    HIGHEST_PERCENTAGE = "highest_percentage"
    MOST_FREQUENT = "most_frequent"


@dataclass(frozen=True)
class AggregationResult:
    """Dominant emotion for one frame.

    ``score`` is the winning confidence in [0, 1] for HIGHEST_PERCENTAGE, or
    the winning face count (an integer in [1, face_count]) for MOST_FREQUENT.
    """

    label: str
    score: float
    strategy: AggregationStrategy
    face_count: int

    def __post_init__(self) -> None:
        if self.label not in EMOTIONS:
            raise ValueError(f"unknown emotion label {self.label!r}")
        if self.face_count < 1:
            raise ValueError("face_count must be >= 1")
        if self.strategy is AggregationStrategy.HIGHEST_PERCENTAGE:
            if not 0.0 <= self.score <= 1.0:
                raise ValueError(f"confidence score out of [0, 1]: {self.score}")
        else:
            if self.score != int(self.score) or not 1 <= self.score <= self.face_count:
                raise ValueError(
                    f"count must be an integer in [1, {self.face_count}]: {self.score}"
                )


def dominant_per_face(distribution: EmotionDistribution) -> tuple[str, float]:
    """Argmax label and score for one face; ties break by canonical label order."""
    best_label = None
    best_score = -1.0
    for label in EMOTIONS:
        score = distribution.scores[label]
        if score > best_score:
            best_label, best_score = label, score
    assert best_label is not None
    return best_label, best_score


def aggregate_highest_percentage(reading: FrameReading) -> AggregationResult:
    """Label of the globally strongest per-face confidence in the frame.

    Score ties across faces go to the earlier face; within a face,
    ``dominant_per_face`` already applies the label-order tie-break.
    """
    if not reading.faces:
        raise NoFaces("cannot aggregate a reading with zero faces")
    best_label = None
    best_score = -1.0
    for face in reading.faces:
        label, score = dominant_per_face(face.distribution)
        if score > best_score:
            best_label, best_score = label, score
    assert best_label is not None
    return AggregationResult(
        label=best_label,
        score=best_score,
        strategy=AggregationStrategy.HIGHEST_PERCENTAGE,
        face_count=len(reading.faces),
    )


def aggregate_most_frequent(reading: FrameReading) -> AggregationResult:
    """Modal dominant label across faces, returned with its face count.

    Count ties break by the higher maximal confidence among the tied labels,
    then by canonical label order.
    """
    if not reading.faces:
        raise NoFaces("cannot aggregate a reading with zero faces")
    dominants = [dominant_per_face(face.distribution) for face in reading.faces]
    counts = Counter(label for label, _ in dominants)
    top = max(counts.values())
    tied = [label for label, n in counts.items() if n == top]
    if len(tied) > 1:
        max_conf = {
            label: max(score for lab, score in dominants if lab == label)
            for label in tied
        }
        tied.sort(key=lambda label: (-max_conf[label], EMOTION_RANK[label]))
    winner = tied[0]
    return AggregationResult(
        label=winner,
        score=counts[winner],
        strategy=AggregationStrategy.MOST_FREQUENT,
        face_count=len(reading.faces),
    )


def aggregate(reading: FrameReading, strategy: AggregationStrategy) -> AggregationResult:
    if strategy is AggregationStrategy.HIGHEST_PERCENTAGE:
        return aggregate_highest_percentage(reading)
    if strategy is AggregationStrategy.MOST_FREQUENT:
        return aggregate_most_frequent(reading)
    raise ValueError(f"unknown strategy {strategy!r}")


@dataclass(frozen=True)
class SmoothingWindow:
    """Majority vote over the last ``capacity`` per-frame labels.

    Damps playlist thrash between captures. A window is a value owned by one
    session; callers must serialize updates per session.
    """

    capacity: int = 3
    entries: tuple[str, ...] = ()
    last_smoothed: str | None = None

    def __post_init__(self) -> None:
        if self.capacity < 1:
            raise ValueError("capacity must be >= 1")
        if len(self.entries) > self.capacity:
            raise ValueError("entries exceed capacity")
        for label in self.entries:
            if label not in EMOTIONS:
                raise ValueError(f"unknown emotion label {label!r}")


def smooth(window: SmoothingWindow, new_label: str) -> tuple[SmoothingWindow, str]:
    """Append a label (evicting the oldest beyond capacity) and vote.

    Returns the updated window and the majority label. On majority ties the
    previous smoothed label wins if it is among the tied set; otherwise the
    tied label observed most recently wins.
    """
    if new_label not in EMOTIONS:
        raise ValueError(f"unknown emotion label {new_label!r}")
    entries = (window.entries + (new_label,))[-window.capacity:]
    counts = Counter(entries)
    top = max(counts.values())
    tied = {label for label, n in counts.items() if n == top}
    if len(tied) == 1:
        smoothed = next(iter(tied))
    elif window.last_smoothed in tied:
        smoothed = window.last_smoothed
    else:
        smoothed = next(label for label in reversed(entries) if label in tied)
    return replace(window, entries=entries, last_smoothed=smoothed), smoothed
