"""Canonical emotion label set and per-face confidence distributions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

# Fixed order; doubles as the deterministic tie-break order everywhere.
EMOTIONS: tuple[str, ...] = (
    "angry",
    "disgust",
    "fear",
    "happy",
    "sad",
    "surprise",
    "neutral",
)

EMOTION_RANK: dict[str, int] = {label: i for i, label in enumerate(EMOTIONS)}

SUM_TOLERANCE = 1e-6


@dataclass(frozen=True)
class EmotionDistribution:
    """Confidence scores over the seven emotion labels, normalized to sum 1.

    Invariants (enforced at construction):
      * every one of the seven labels is present exactly once
      * each score lies in [0, 1]
      * scores sum to 1 within ``SUM_TOLERANCE``
    """

    scores: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        labels = set(self.scores)
        if labels != set(EMOTIONS):
            missing = set(EMOTIONS) - labels
            extra = labels - set(EMOTIONS)
            raise ValueError(
                f"distribution must cover exactly the seven labels "
                f"(missing={sorted(missing)}, extra={sorted(extra)})"
            )
        for label, score in self.scores.items():
            if not 0.0 <= score <= 1.0:
                raise ValueError(f"score for {label!r} out of [0, 1]: {score}")
        total = sum(self.scores.values())
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise ValueError(f"scores must sum to 1 +/- {SUM_TOLERANCE}, got {total}")
        # Re-key in canonical order so iteration is deterministic.
        object.__setattr__(
            self, "scores", {label: float(self.scores[label]) for label in EMOTIONS}
        )

    def __getitem__(self, label: str) -> float:
        return self.scores[label]
