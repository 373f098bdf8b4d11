"""Local music library and the per-session player state machine.

The library lives under a root directory with one subdirectory per mood; an
optional ``manifest.yml`` (or ``.yaml``/``.json``) at the root overrides track
titles, moods, and durations. Audio files are opaque bytes to this module.

Player state transitions are pure: every operation takes a ``PlayerState`` and
returns a new one. Randomness and wall-clock time are injected so behavior is
fully deterministic under test. State mutations for one session must be
serialized by the caller (single writer per session).
"""

from __future__ import annotations

import logging
import os
import time
import wave
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Protocol

import yaml

from .mood_mapping import MoodConfig

log = logging.getLogger(__name__)

AUDIO_EXTENSIONS = {".mp3", ".wav", ".ogg", ".flac", ".m4a", ".aac", ".opus"}

MANIFEST_NAMES = ("manifest.yml", "manifest.yaml", "manifest.json")

DEFAULT_OVERRIDE_LOCKOUT_S = 120.0

# last_change_reason values
AUTO_MOOD = "auto_mood"
MANUAL_SELECT = "manual_select"
MANUAL_NAV = "manual_nav"
STARTUP = "startup"


class LibraryEmpty(Exception):
    """No mood has any playable track."""


class MoodMissing(Exception):
    """Every configured mood lacks a library directory."""


class UnknownMood(Exception):
    """The requested mood has no (non-empty) playlist."""


class UnknownTrack(Exception):
    """No track with the requested identifier exists in the library."""


class RandomSource(Protocol):
    def randrange(self, stop: int) -> int: ...


@dataclass(frozen=True)
class Track:
    track_id: str  # library-relative posix path; stable across rescans
    title: str
    file_path: Path
    mood: str
    duration_s: float | None = None


@dataclass(frozen=True)
class Playlist:
    playlist_id: str
    mood: str
    tracks: tuple[Track, ...]

    def __post_init__(self) -> None:
        if not self.tracks:
            raise ValueError(f"playlist {self.playlist_id!r} must have >= 1 track")
        off_mood = [t.track_id for t in self.tracks if t.mood != self.mood]
        if off_mood:
            raise ValueError(f"tracks {off_mood} do not carry mood {self.mood!r}")


@dataclass
class ScanReport:
    skipped: list[tuple[str, str]] = field(default_factory=list)  # (path, reason)
    missing_moods: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class Library:
    """Scanned playlists plus the scan report, with id-based lookups."""

    playlists: tuple[Playlist, ...]
    report: ScanReport
    root: Path | None = None

    def playlist_for(self, mood: str) -> Playlist:
        for playlist in self.playlists:
            if playlist.mood == mood:
                return playlist
        raise UnknownMood(f"no playlist for mood {mood!r}")

    def by_id(self, playlist_id: str) -> Playlist:
        for playlist in self.playlists:
            if playlist.playlist_id == playlist_id:
                return playlist
        raise UnknownMood(f"no playlist with id {playlist_id!r}")

    def track(self, track_id: str) -> tuple[Track, Playlist, int]:
        for playlist in self.playlists:
            for index, track in enumerate(playlist.tracks):
                if track.track_id == track_id:
                    return track, playlist, index
        raise UnknownTrack(f"no track with id {track_id!r}")

    @property
    def moods(self) -> tuple[str, ...]:
        return tuple(p.mood for p in self.playlists)


def _load_manifest(root: Path, report: ScanReport) -> dict[str, dict]:
    for name in MANIFEST_NAMES:
        path = root / name
        if not path.is_file():
            continue
        try:
            doc = yaml.safe_load(path.read_text()) or {}
        except yaml.YAMLError as exc:
            report.warnings.append(f"manifest {name} does not parse: {exc}")
            return {}
        entries = doc.get("tracks", doc) if isinstance(doc, dict) else {}
        if not isinstance(entries, dict):
            report.warnings.append(f"manifest {name} has no usable tracks mapping")
            return {}
        return {str(k): (v if isinstance(v, dict) else {}) for k, v in entries.items()}
    return {}


def _wav_duration(path: Path) -> float | None:
    if path.suffix.lower() != ".wav":
        return None
    try:
        with wave.open(str(path), "rb") as w:
            rate = w.getframerate()
            return w.getnframes() / rate if rate else None
    except (wave.Error, OSError, EOFError):
        return None


def scan_library(root: str | Path, config: MoodConfig) -> Library:
    """Enumerate mood directories into playlists with deterministic order.

    Tracks within a playlist are ordered lexicographically by file name.
    Unreadable entries are excluded and listed in the scan report; configured
    moods without a directory (or without any track) are reported, not
    silently created.

    Raises:
        LibraryEmpty: no mood has any track.
        MoodMissing: every configured mood lacks a directory while the root
            holds other content.
    """
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"library root {root} does not exist")
    report = ScanReport()
    manifest = _load_manifest(root, report)
    moods = sorted(config.mood_to_playlist)

    tracks: list[Track] = []
    dirs_found = 0
    for mood in moods:
        mood_dir = root / mood
        if not mood_dir.is_dir():
            report.missing_moods.append(mood)
            continue
        dirs_found += 1
        for entry in sorted(mood_dir.iterdir(), key=lambda p: p.name):
            if entry.suffix.lower() not in AUDIO_EXTENSIONS:
                continue
            rel = entry.relative_to(root).as_posix()
            if not entry.is_file():
                report.skipped.append((rel, "not a readable file"))
                continue
            if not os.access(entry, os.R_OK):
                report.skipped.append((rel, "permission denied"))
                continue
            override = manifest.pop(rel, {})
            track_mood = str(override.get("mood", mood))
            if track_mood not in config.mood_to_playlist:
                report.warnings.append(
                    f"manifest assigns {rel} to unknown mood {track_mood!r}; keeping {mood!r}"
                )
                track_mood = mood
            duration = override.get("duration_s")
            tracks.append(
                Track(
                    track_id=rel,
                    title=str(override.get("title", entry.stem)),
                    file_path=entry,
                    mood=track_mood,
                    duration_s=float(duration) if duration is not None else _wav_duration(entry),
                )
            )

    for leftover in manifest:
        report.warnings.append(f"manifest entry {leftover!r} matches no scanned file")

    if not tracks:
        if dirs_found == 0 and any(root.iterdir()):
            raise MoodMissing(
                f"none of the configured moods {moods} has a directory under {root}"
            )
        raise LibraryEmpty(f"no mood under {root} has any track")

    playlists = []
    for mood in moods:
        mood_tracks = tuple(
            sorted((t for t in tracks if t.mood == mood), key=lambda t: t.track_id)
        )
        if not mood_tracks:
            if mood not in report.missing_moods:
                report.missing_moods.append(mood)
            continue
        playlists.append(
            Playlist(
                playlist_id=config.mood_to_playlist[mood],
                mood=mood,
                tracks=mood_tracks,
            )
        )
    return Library(playlists=tuple(playlists), report=report, root=root)


@dataclass(frozen=True)
class PlayerState:
    """Snapshot of one session's player; the heart of the recommendation loop.

    ``track_index`` always addresses a track in the current playlist.
    ``override_active`` implies ``override_until`` was set in the future at the
    time of the manual action that engaged it.
    """

    session_id: str
    current_mood: str | None
    playlist_id: str
    track_index: int
    playing: bool = False
    override_active: bool = False
    override_until: float | None = None
    last_change_reason: str = STARTUP


class PlayerEngine:
    """Pure state-transition functions over a scanned library.

    Manual operations (select_track, select_playlist, user-initiated
    next/prev) engage the override lockout: for ``override_lockout_s`` seconds
    automatic mood switches are suppressed. Track-end auto-advance never
    engages it, keeping the loop continuous.
    """

    def __init__(
        self, library: Library, override_lockout_s: float = DEFAULT_OVERRIDE_LOCKOUT_S
    ) -> None:
        self.library = library
        self.override_lockout_s = float(override_lockout_s)

    def initial_state(self, session_id: str) -> PlayerState:
        first = self.library.playlists[0]
        return PlayerState(
            session_id=session_id,
            current_mood=None,
            playlist_id=first.playlist_id,
            track_index=0,
            playing=False,
            last_change_reason=STARTUP,
        )

    def _locked(self, state: PlayerState, now: float) -> bool:
        return (
            state.override_active
            and state.override_until is not None
            and now < state.override_until
        )

    def _engage(self, now: float) -> dict:
        return {
            "override_active": True,
            "override_until": now + self.override_lockout_s,
        }

    def on_mood_detected(
        self,
        state: PlayerState,
        mood: str,
        rng: RandomSource,
        now: float | None = None,
    ) -> PlayerState:
        """Switch to the mood's playlist with a random track.

        Identity when the mood is already current (no track restart on
        re-detection) or while a manual override lockout is active. A
        successful automatic switch clears the override.
        """
        playlist = self.library.playlist_for(mood)
        if state.current_mood == mood:
            return state
        now = time.time() if now is None else now
        if self._locked(state, now):
            return state
        return replace(
            state,
            current_mood=mood,
            playlist_id=playlist.playlist_id,
            track_index=rng.randrange(len(playlist.tracks)),
            playing=True,
            override_active=False,
            override_until=None,
            last_change_reason=AUTO_MOOD,
        )

    def next_track(
        self,
        state: PlayerState,
        now: float | None = None,
        *,
        user_initiated: bool = True,
    ) -> PlayerState:
        """Advance one track, wrapping at the end (continuous loop).

        User-initiated advances engage the override lockout and set the
        ``manual_nav`` reason; track-end advances change only the index.
        """
        playlist = self.library.by_id(state.playlist_id)
        index = (state.track_index + 1) % len(playlist.tracks)
        if not user_initiated:
            return replace(state, track_index=index)
        now = time.time() if now is None else now
        return replace(
            state,
            track_index=index,
            playing=True,
            last_change_reason=MANUAL_NAV,
            **self._engage(now),
        )

    def prev_track(self, state: PlayerState, now: float | None = None) -> PlayerState:
        """Step back one track, wrapping at the start. Always user-initiated."""
        playlist = self.library.by_id(state.playlist_id)
        index = (state.track_index - 1) % len(playlist.tracks)
        now = time.time() if now is None else now
        return replace(
            state,
            track_index=index,
            playing=True,
            last_change_reason=MANUAL_NAV,
            **self._engage(now),
        )

    def select_track(
        self, state: PlayerState, track_id: str, now: float | None = None
    ) -> PlayerState:
        """Jump to an explicit track; the user's choice redefines the mood context."""
        track, playlist, index = self.library.track(track_id)
        now = time.time() if now is None else now
        return replace(
            state,
            current_mood=playlist.mood,
            playlist_id=playlist.playlist_id,
            track_index=index,
            playing=True,
            last_change_reason=MANUAL_SELECT,
            **self._engage(now),
        )

    def select_playlist(
        self,
        state: PlayerState,
        mood: str,
        rng: RandomSource,
        now: float | None = None,
    ) -> PlayerState:
        """Switch to a mood's playlist with a fresh random track.

        Re-picking the current playlist re-randomizes within it and refreshes
        the lockout.
        """
        playlist = self.library.playlist_for(mood)
        now = time.time() if now is None else now
        return replace(
            state,
            current_mood=mood,
            playlist_id=playlist.playlist_id,
            track_index=rng.randrange(len(playlist.tracks)),
            playing=True,
            last_change_reason=MANUAL_SELECT,
            **self._engage(now),
        )

    def set_playing(self, state: PlayerState, playing: bool) -> PlayerState:
        """Pause/resume flag only; does not engage the override lockout."""
        return replace(state, playing=bool(playing))
