"""Local HTTP service: frame ingestion, player control, SSE state push, audio.

Wire contracts (all JSON, UTF-8):
  * ``POST /api/sessions`` -> ``{"session_id": ...}``
  * ``POST /api/sessions/{id}/frames`` body ``{"image_b64", "captured_at_ms"}``
  * ``GET  /api/sessions/{id}/state``
  * ``POST /api/sessions/{id}/control`` body ``{"command", "track_id"?, "mood"?, "playing"?}``
  * ``GET  /api/playlists``
  * ``GET  /api/audio/{track_id}`` (byte-range requests supported)
  * ``GET  /api/sessions/{id}/events`` (server-sent events, one snapshot per transition)
  * ``GET  /api/metrics``

Sessions are anonymous and in-memory; a restart loses them. Mutations for one
session are serialized under that session's lock, so snapshots are never torn.
No decoded image data survives a request: frames are processed and discarded.
"""

from __future__ import annotations

import asyncio
import json
import logging
import random
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse, Response, StreamingResponse
from pydantic import BaseModel

from . import frame_pipeline as fp
from .aggregation import AggregationStrategy, SmoothingWindow, aggregate, smooth
from .config import AppConfig
from .fixtures import FixtureBackend, FixtureGridDetector, load_labels_file
from .inference import CascadeFaceDetector, DeepFaceBackend
from .metrics import MetricsRegistry
from .mood_mapping import map_emotion
from .playlist_engine import (
    Library,
    PlayerEngine,
    PlayerState,
    UnknownMood,
    UnknownTrack,
    scan_library,
)

log = logging.getLogger(__name__)

SSE_HEARTBEAT_S = 15.0

AUDIO_MEDIA_TYPES = {
    ".mp3": "audio/mpeg",
    ".wav": "audio/wav",
    ".ogg": "audio/ogg",
    ".flac": "audio/flac",
    ".m4a": "audio/mp4",
    ".aac": "audio/aac",
    ".opus": "audio/opus",
}

CONTROL_COMMANDS = (
    "next",
    "prev",
    "select_track",
    "select_playlist",
    "set_playing",
    "track_ended",
)


@dataclass(frozen=True)
class StateSnapshot:
    """What the UI renders: consistent with the PlayerState at snapshot time."""

    detected_emotion: str | None
    smoothed_emotion: str | None
    mood: str | None
    playlist_id: str
    track_id: str
    track_title: str
    track_index: int
    playing: bool
    override_active: bool
    strategy_in_use: str
    seq: int

    def to_doc(self) -> dict:
        return {
            "detected_emotion": self.detected_emotion,
            "smoothed_emotion": self.smoothed_emotion,
            "mood": self.mood,
            "playlist_id": self.playlist_id,
            "track": {"track_id": self.track_id, "title": self.track_title},
            "track_index": self.track_index,
            "playing": self.playing,
            "override_active": self.override_active,
            "strategy_in_use": self.strategy_in_use,
            "seq": self.seq,
        }


@dataclass
class _Subscriber:
    queue: asyncio.Queue
    loop: asyncio.AbstractEventLoop


@dataclass
class SessionContext:
    """Per-session state. Holds labels, indices, and timestamps - never pixels."""

    session_id: str
    window: SmoothingWindow
    state: PlayerState
    created_at: float
    last_frame_at: int | None = None  # captured_at_ms of the last accepted frame
    seq: int = 0
    last_detected: str | None = None
    last_smoothed: str | None = None
    lock: threading.RLock = field(default_factory=threading.RLock)
    subscribers: list[_Subscriber] = field(default_factory=list)


class FramePayload(BaseModel):
    image_b64: str
    captured_at_ms: int


class ControlPayload(BaseModel):
    command: str
    track_id: str | None = None
    mood: str | None = None
    playing: bool | None = None


class MoodService:
    """Owns the library, sessions, and the pipeline wiring."""

    def __init__(
        self,
        config: AppConfig,
        library: Library | None = None,
        detector: fp.FaceDetector | None = None,
        backend: fp.EmotionBackend | None = None,
        rng: random.Random | None = None,
        clock=None,
        metrics: MetricsRegistry | None = None,
    ) -> None:
        self.config = config
        self.mood_config = config.mood_config
        self.library = library if library is not None else scan_library(
            config.library_root, config.mood_config
        )
        self.engine = PlayerEngine(self.library, config.override_lockout_s)
        self.strategy = AggregationStrategy(config.aggregation_strategy)
        labels = (
            load_labels_file(config.fixture_labels) if config.fixture_labels else None
        )
        if detector is None:
            detector = (
                FixtureGridDetector(labels)
                if config.detector == "fixture"
                else CascadeFaceDetector()
            )
        if backend is None:
            backend = (
                DeepFaceBackend() if config.backend == "deepface" else FixtureBackend(labels)
            )
        self.detector = detector
        self.backend = backend
        self.rng = rng if rng is not None else random.Random(config.random_seed)
        self.clock = clock if clock is not None else time.time
        self.metrics = metrics if metrics is not None else MetricsRegistry()
        self.sessions: dict[str, SessionContext] = {}
        self._sessions_lock = threading.Lock()

    # -- sessions ----------------------------------------------------------

    def create_session(self) -> SessionContext:
        session_id = uuid.uuid4().hex
        ctx = SessionContext(
            session_id=session_id,
            window=SmoothingWindow(capacity=self.config.smoothing_capacity),
            state=self.engine.initial_state(session_id),
            created_at=self.clock(),
        )
        with self._sessions_lock:
            self.sessions[session_id] = ctx
        return ctx

    def get_session(self, session_id: str) -> SessionContext:
        with self._sessions_lock:
            ctx = self.sessions.get(session_id)
        if ctx is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        return ctx

    def get_or_create_session(self, session_id: str) -> SessionContext:
        with self._sessions_lock:
            ctx = self.sessions.get(session_id)
            if ctx is None:
                ctx = SessionContext(
                    session_id=session_id,
                    window=SmoothingWindow(capacity=self.config.smoothing_capacity),
                    state=self.engine.initial_state(session_id),
                    created_at=self.clock(),
                )
                self.sessions[session_id] = ctx
        return ctx

    # -- snapshots and events ------------------------------------------------

    def snapshot(self, ctx: SessionContext) -> StateSnapshot:
        state = ctx.state
        playlist = self.library.by_id(state.playlist_id)
        track = playlist.tracks[state.track_index]
        return StateSnapshot(
            detected_emotion=ctx.last_detected,
            smoothed_emotion=ctx.last_smoothed,
            mood=state.current_mood,
            playlist_id=state.playlist_id,
            track_id=track.track_id,
            track_title=track.title,
            track_index=state.track_index,
            playing=state.playing,
            override_active=state.override_active,
            strategy_in_use=self.strategy.value,
            seq=ctx.seq,
        )

    def _emit(self, ctx: SessionContext, before: PlayerState) -> StateSnapshot:
        """Build the post-transition snapshot; push it if the state changed."""
        if ctx.state != before:
            ctx.seq += 1
            snap = self.snapshot(ctx)
            doc = json.dumps(snap.to_doc())
            for sub in list(ctx.subscribers):
                sub.loop.call_soon_threadsafe(sub.queue.put_nowait, doc)
            return snap
        return self.snapshot(ctx)

    def subscribe(self, ctx: SessionContext, loop: asyncio.AbstractEventLoop) -> _Subscriber:
        sub = _Subscriber(queue=asyncio.Queue(), loop=loop)
        with ctx.lock:
            ctx.subscribers.append(sub)
            sub.queue.put_nowait(json.dumps(self.snapshot(ctx).to_doc()))
        return sub

    def unsubscribe(self, ctx: SessionContext, sub: _Subscriber) -> None:
        with ctx.lock:
            if sub in ctx.subscribers:
                ctx.subscribers.remove(sub)

    # -- operations ----------------------------------------------------------

    def submit_frame(self, ctx: SessionContext, payload: FramePayload) -> StateSnapshot:
        with ctx.lock:
            if ctx.last_frame_at is not None:
                if payload.captured_at_ms < ctx.last_frame_at:
                    raise HTTPException(
                        status_code=400,
                        detail="captured_at_ms went backwards within the session",
                    )
                if payload.captured_at_ms - ctx.last_frame_at < self.config.min_frame_spacing_ms:
                    raise HTTPException(
                        status_code=429,
                        detail=f"frames must be >= {self.config.min_frame_spacing_ms} ms apart",
                    )
            submission = fp.FrameSubmission(
                session_id=ctx.session_id,
                image_payload=payload.image_b64,
                captured_at=payload.captured_at_ms,
            )
            try:
                reading = fp.analyze_frame(
                    submission, self.detector, self.backend, self.metrics
                )
            except (fp.EmptyPayload, fp.InvalidEncoding, fp.UnsupportedImageFormat) as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from exc
            except (fp.DetectorUnavailable, fp.BackendFailure) as exc:
                raise HTTPException(status_code=503, detail=str(exc)) from exc
            ctx.last_frame_at = payload.captured_at_ms

            before = ctx.state
            if reading.faces:
                t0 = time.perf_counter()
                result = aggregate(reading, self.strategy)
                ctx.window, smoothed = smooth(ctx.window, result.label)
                self.metrics.record("aggregate", (time.perf_counter() - t0) * 1000.0)
                ctx.last_detected = result.label
                ctx.last_smoothed = smoothed

                t1 = time.perf_counter()
                mood = map_emotion(self.mood_config, smoothed)
                try:
                    ctx.state = self.engine.on_mood_detected(
                        ctx.state, mood, self.rng, now=self.clock()
                    )
                except UnknownMood:
                    # Mood configured but its playlist missed the scan; the
                    # live loop keeps running on the current playlist.
                    log.warning("no playlist for detected mood %r; state unchanged", mood)
                self.metrics.record("retrieve_song", (time.perf_counter() - t1) * 1000.0)
            else:
                ctx.last_detected = None
            return self._emit(ctx, before)

    def control(self, ctx: SessionContext, payload: ControlPayload) -> StateSnapshot:
        with ctx.lock:
            before = ctx.state
            now = self.clock()
            try:
                if payload.command == "next":
                    ctx.state = self.engine.next_track(ctx.state, now)
                elif payload.command == "prev":
                    ctx.state = self.engine.prev_track(ctx.state, now)
                elif payload.command == "track_ended":
                    ctx.state = self.engine.next_track(ctx.state, now, user_initiated=False)
                elif payload.command == "select_track":
                    if payload.track_id is None:
                        raise HTTPException(status_code=400, detail="select_track needs track_id")
                    ctx.state = self.engine.select_track(ctx.state, payload.track_id, now)
                elif payload.command == "select_playlist":
                    if payload.mood is None:
                        raise HTTPException(status_code=400, detail="select_playlist needs mood")
                    ctx.state = self.engine.select_playlist(
                        ctx.state, payload.mood, self.rng, now
                    )
                elif payload.command == "set_playing":
                    if payload.playing is None:
                        raise HTTPException(status_code=400, detail="set_playing needs playing")
                    ctx.state = self.engine.set_playing(ctx.state, payload.playing)
                else:
                    raise HTTPException(
                        status_code=400,
                        detail=f"unknown command {payload.command!r}; expected one of {CONTROL_COMMANDS}",
                    )
            except UnknownTrack as exc:
                raise HTTPException(status_code=404, detail=str(exc)) from exc
            except UnknownMood as exc:
                raise HTTPException(status_code=404, detail=str(exc)) from exc
            return self._emit(ctx, before)

    def playlists_doc(self) -> dict:
        return {
            "playlists": [
                {
                    "playlist_id": p.playlist_id,
                    "mood": p.mood,
                    "track_count": len(p.tracks),
                    "tracks": [
                        {
                            "track_id": t.track_id,
                            "title": t.title,
                            "duration_s": t.duration_s,
                        }
                        for t in p.tracks
                    ],
                }
                for p in self.library.playlists
            ]
        }


def _parse_range(header: str, size: int) -> tuple[int, int] | None:
    """First byte range of a ``bytes=`` header as an inclusive (start, end)."""
    if not header.startswith("bytes="):
        return None
    spec = header[len("bytes="):].split(",")[0].strip()
    start_s, _, end_s = spec.partition("-")
    try:
        if start_s == "":
            # suffix form: last N bytes
            length = int(end_s)
            if length <= 0:
                return None
            return max(0, size - length), size - 1
        start = int(start_s)
        end = int(end_s) if end_s else size - 1
    except ValueError:
        return None
    end = min(end, size - 1)
    if start > end or start >= size:
        return None
    return start, end


def _file_chunks(path: Path, start: int, end: int, chunk: int = 64 * 1024) -> Iterator[bytes]:
    remaining = end - start + 1
    with path.open("rb") as fh:
        fh.seek(start)
        while remaining > 0:
            data = fh.read(min(chunk, remaining))
            if not data:
                break
            remaining -= len(data)
            yield data


def create_app(
    config: AppConfig,
    *,
    library: Library | None = None,
    detector: fp.FaceDetector | None = None,
    backend: fp.EmotionBackend | None = None,
    rng: random.Random | None = None,
    clock=None,
    metrics: MetricsRegistry | None = None,
    ui_dist: Path | None = None,
    sse_heartbeat_s: float = SSE_HEARTBEAT_S,
) -> FastAPI:
    service = MoodService(
        config,
        library=library,
        detector=detector,
        backend=backend,
        rng=rng,
        clock=clock,
        metrics=metrics,
    )
    app = FastAPI(title="moodtunes", version="0.1.0")
    app.state.service = service

    @app.post("/api/sessions", status_code=201)
    def create_session() -> dict:
        ctx = service.create_session()
        return {"session_id": ctx.session_id}

    @app.post("/api/sessions/{session_id}/frames")
    def submit_frame(session_id: str, payload: FramePayload) -> dict:
        ctx = service.get_or_create_session(session_id)
        return service.submit_frame(ctx, payload).to_doc()

    @app.get("/api/sessions/{session_id}/state")
    def get_state(session_id: str) -> dict:
        ctx = service.get_session(session_id)
        with ctx.lock:
            return service.snapshot(ctx).to_doc()

    @app.post("/api/sessions/{session_id}/control")
    def control(session_id: str, payload: ControlPayload) -> dict:
        ctx = service.get_session(session_id)
        return service.control(ctx, payload).to_doc()

    @app.get("/api/playlists")
    def list_playlists() -> dict:
        return service.playlists_doc()

    @app.get("/api/metrics")
    def get_metrics() -> dict:
        return {
            "stages": {
                stage: summary.to_doc()
                for stage, summary in service.metrics.summaries().items()
            }
        }

    @app.get("/api/audio/{track_id:path}")
    def serve_audio(track_id: str, request: Request) -> Response:
        try:
            track, _, _ = service.library.track(track_id)
        except UnknownTrack as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        path = track.file_path
        if not path.is_file():
            raise HTTPException(
                status_code=410, detail=f"file for {track_id!r} vanished from the library"
            )
        size = path.stat().st_size
        media_type = AUDIO_MEDIA_TYPES.get(path.suffix.lower(), "application/octet-stream")
        base_headers = {"Accept-Ranges": "bytes"}
        range_header = request.headers.get("range")
        if range_header:
            span = _parse_range(range_header, size)
            if span is None:
                return Response(
                    status_code=416,
                    headers={**base_headers, "Content-Range": f"bytes */{size}"},
                )
            start, end = span
            return StreamingResponse(
                _file_chunks(path, start, end),
                status_code=206,
                media_type=media_type,
                headers={
                    **base_headers,
                    "Content-Range": f"bytes {start}-{end}/{size}",
                    "Content-Length": str(end - start + 1),
                },
            )
        return StreamingResponse(
            _file_chunks(path, 0, size - 1),
            media_type=media_type,
            headers={**base_headers, "Content-Length": str(size)},
        )

    @app.get("/api/sessions/{session_id}/events")
    async def event_stream(session_id: str) -> StreamingResponse:
        ctx = service.get_session(session_id)
        loop = asyncio.get_running_loop()
        sub = service.subscribe(ctx, loop)

        async def stream():
            try:
                while True:
                    try:
                        doc = await asyncio.wait_for(sub.queue.get(), timeout=sse_heartbeat_s)
                    except asyncio.TimeoutError:
                        yield ": keepalive\n\n"
                        continue
                    seq = json.loads(doc).get("seq", 0)
                    yield f"id: {seq}\ndata: {doc}\n\n"
            finally:
                service.unsubscribe(ctx, sub)

        return StreamingResponse(stream(), media_type="text/event-stream")

    @app.get("/")
    def index() -> JSONResponse:
        return JSONResponse(
            {
                "service": "moodtunes",
                "capture_interval_ms": config.capture_interval_ms,
                "ui": "/ui/" if app.state.ui_mounted else None,
            }
        )

    app.state.ui_mounted = False
    dist = ui_dist if ui_dist is not None else Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if dist.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=dist, html=True), name="ui")
        app.state.ui_mounted = True
    return app
