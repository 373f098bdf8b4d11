"""Service configuration: one YAML document, mood config inline or by path."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .mood_mapping import ConfigInvalid, MoodConfig, load_mood_config


@dataclass
class AppConfig:
    library_root: Path
    capture_interval_ms: int = 3000  # UI cadence hint; the backend is cadence-agnostic
    aggregation_strategy: str = "highest_percentage"
    smoothing_capacity: int = 3
    override_lockout_s: float = 120.0
    min_frame_spacing_ms: int = 500
    mood_config: MoodConfig = field(default_factory=MoodConfig)
    detector: str = "cascade"  # cascade | fixture
    backend: str = "fixture"  # fixture | deepface
    fixture_labels: Path | None = None
    random_seed: int | None = None

    def __post_init__(self) -> None:
        self.library_root = Path(self.library_root)
        if self.smoothing_capacity < 1:
            raise ConfigInvalid("smoothing_capacity must be >= 1")
        if self.min_frame_spacing_ms < 0:
            raise ConfigInvalid("min_frame_spacing_ms must be >= 0")
        if self.aggregation_strategy not in ("highest_percentage", "most_frequent"):
            raise ConfigInvalid(
                f"unknown aggregation_strategy {self.aggregation_strategy!r}"
            )


def load_app_config(path: str | Path) -> AppConfig:
    """Load the service configuration document.

    The mood mapping may sit inline under ``mood_config`` or in a separate
    file named by ``mood_config_path`` (resolved relative to this document).
    """
    path = Path(path)
    doc = yaml.safe_load(path.read_text()) or {}
    if not isinstance(doc, dict):
        raise ConfigInvalid(f"config {path} must be a mapping document")
    if "library_root" not in doc:
        raise ConfigInvalid("config requires a library_root")

    if "mood_config_path" in doc:
        mood_config = load_mood_config(path.parent / doc.pop("mood_config_path"))
    else:
        mood_config = load_mood_config(doc.pop("mood_config", None))

    library_root = path.parent / Path(doc.pop("library_root"))
    known = {f for f in AppConfig.__dataclass_fields__ if f not in ("library_root", "mood_config")}
    unknown = set(doc) - known
    if unknown:
        raise ConfigInvalid(f"unknown config keys: {sorted(unknown)}")
    if doc.get("fixture_labels") is not None:
        doc["fixture_labels"] = path.parent / doc["fixture_labels"]
    return AppConfig(library_root=library_root, mood_config=mood_config, **doc)
