"""Emotion label -> mood -> playlist mapping, driven by editable configuration.

The built-in default folds the seven labels onto four moods: positive labels
(happy, surprise) land on "happy", the negative cluster splits between "sad"
(sad, fear) and "angry" (angry, disgust), and "neutral" maps to "calm". Every
entry can be overridden by a config document. Moods declared in
``mood_to_playlist`` but never referenced by an emotion are manual-only:
reachable through the dropdown, never through detection.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import yaml

from .emotions import EMOTIONS

log = logging.getLogger(__name__)

DEFAULT_EMOTION_TO_MOOD: dict[str, str] = {
    "happy": "happy",
    "surprise": "happy",
    "sad": "sad",
    "fear": "sad",
    "angry": "angry",
    "disgust": "angry",
    "neutral": "calm",
}

DEFAULT_MOODS: tuple[str, ...] = ("happy", "sad", "angry", "calm")


class ConfigInvalid(Exception):
    """The mood configuration document violates the mapping invariants."""


@dataclass(frozen=True)
class MoodConfig:
    """Total emotion->mood mapping plus mood->playlist identifiers.

    Invariants: all seven emotion labels are mapped, and every mood referenced
    by ``emotion_to_mood`` has a playlist entry.
    """

    emotion_to_mood: Mapping[str, str] = field(
        default_factory=lambda: dict(DEFAULT_EMOTION_TO_MOOD)
    )
    mood_to_playlist: Mapping[str, str] = field(
        default_factory=lambda: {mood: mood for mood in DEFAULT_MOODS}
    )

    def __post_init__(self) -> None:
        unknown = set(self.emotion_to_mood) - set(EMOTIONS)
        if unknown:
            raise ConfigInvalid(f"unknown emotion labels in mapping: {sorted(unknown)}")
        missing = set(EMOTIONS) - set(self.emotion_to_mood)
        if missing:
            raise ConfigInvalid(f"emotion labels without a mood: {sorted(missing)}")
        dangling = set(self.emotion_to_mood.values()) - set(self.mood_to_playlist)
        if dangling:
            raise ConfigInvalid(
                f"moods without a playlist entry: {sorted(dangling)}"
            )

    @property
    def moods(self) -> tuple[str, ...]:
        return tuple(sorted(self.mood_to_playlist))


def default_mood_config() -> MoodConfig:
    return MoodConfig()


def load_mood_config(source: str | Path | Mapping | None) -> MoodConfig:
    """Build a validated MoodConfig from a YAML document, path, or mapping.

    An empty document yields the built-in defaults. A partial
    ``emotion_to_mood`` section is completed from the defaults (logged);
    ``mood_to_playlist`` entries are merged over the default identity mapping
    for the four built-in moods, so custom moods must be declared explicitly.

    Raises:
        ConfigInvalid: unknown emotion label, a mood without a playlist entry,
            or a document that does not parse to a mapping.
    """
    if source is None:
        return default_mood_config()
    if isinstance(source, Mapping):
        doc: Mapping = source
    else:
        text = Path(source).read_text() if isinstance(source, Path) else source
        try:
            parsed = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigInvalid(f"mood config does not parse: {exc}") from exc
        if parsed is None:
            return default_mood_config()
        if not isinstance(parsed, Mapping):
            raise ConfigInvalid(f"mood config must be a mapping, got {type(parsed).__name__}")
        doc = parsed

    raw_emotions = doc.get("emotion_to_mood") or {}
    raw_playlists = doc.get("mood_to_playlist") or {}
    if not isinstance(raw_emotions, Mapping) or not isinstance(raw_playlists, Mapping):
        raise ConfigInvalid("emotion_to_mood and mood_to_playlist must be mappings")

    emotion_to_mood = dict(DEFAULT_EMOTION_TO_MOOD)
    for label, mood in raw_emotions.items():
        if label not in EMOTIONS:
            raise ConfigInvalid(f"unknown emotion label {label!r}")
        emotion_to_mood[label] = str(mood)
    omitted = set(EMOTIONS) - set(raw_emotions)
    if raw_emotions and omitted:
        log.warning(
            "mood config leaves %s unmapped; using built-in defaults for them",
            sorted(omitted),
        )

    mood_to_playlist = {mood: mood for mood in DEFAULT_MOODS}
    mood_to_playlist.update({str(m): str(p) for m, p in raw_playlists.items()})

    return MoodConfig(emotion_to_mood=emotion_to_mood, mood_to_playlist=mood_to_playlist)


def map_emotion(config: MoodConfig, label: str) -> str:
    """Deterministic, total lookup from an emotion label to a mood name."""
    if label not in EMOTIONS:
        raise ValueError(f"unknown emotion label {label!r}")
    return config.emotion_to_mood[label]
