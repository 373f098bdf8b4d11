import base64
import io
import threading
import time
from pathlib import Path

import pytest
import uvicorn
from PIL import Image

from moodtunes.emotions import EMOTIONS, EmotionDistribution
from moodtunes.frame_pipeline import FaceReading, FaceRegion, FrameReading

FIXTURES_DIR = Path(__file__).parent / "fixtures"

DEFAULT_MOOD_DIRS = ("angry", "calm", "happy", "sad")


class FakeClock:
    """Injectable wall clock; seconds advance only when told to."""

    def __init__(self, start: float = 1_000.0):
        self.now = start

    def __call__(self) -> float:
        return self.now

    def advance(self, seconds: float) -> None:
        self.now += seconds


class FakeRng:
    """random-source stand-in yielding a scripted sequence of indices."""

    def __init__(self, values):
        self.values = list(values)

    def randrange(self, stop: int) -> int:
        value = self.values.pop(0)
        assert 0 <= value < stop, f"scripted value {value} out of range({stop})"
        return value


def make_distribution(**scores) -> EmotionDistribution:
    """Distribution from explicit scores; the remainder spreads over the rest."""
    given = sum(scores.values())
    rest_labels = [label for label in EMOTIONS if label not in scores]
    rest = (1.0 - given) / len(rest_labels) if rest_labels else 0.0
    return EmotionDistribution(
        {label: scores.get(label, rest) for label in EMOTIONS}
    )


def make_reading(*face_specs, captured_at: int = 0) -> FrameReading:
    """Reading from (label, confidence) pairs or explicit distributions."""
    faces = []
    for i, spec in enumerate(face_specs):
        if isinstance(spec, EmotionDistribution):
            dist = spec
        else:
            label, confidence = spec
            dist = make_distribution(**{label: confidence})
        faces.append(FaceReading(FaceRegion(i * 10, 0, 10, 10), dist))
    return FrameReading(captured_at=captured_at, faces=tuple(faces))


def plain_png_b64(width: int = 100, height: int = 100, color=(128, 128, 128)) -> str:
    buf = io.BytesIO()
    Image.new("RGB", (width, height), color).save(buf, format="PNG")
    return base64.b64encode(buf.getvalue()).decode("ascii")


def build_library_tree(root: Path, layout=None) -> Path:
    """Write a fake audio tree: one directory per mood, opaque file bytes."""
    if layout is None:
        layout = {
            "happy": ["upbeat1.mp3", "upbeat2.mp3", "upbeat3.mp3"],
            "sad": ["blue1.mp3", "blue2.mp3", "blue3.mp3", "blue4.mp3"],
            "angry": ["loud1.mp3", "loud2.mp3"],
            "calm": ["still1.mp3", "still2.mp3"],
        }
    for mood, names in layout.items():
        mood_dir = root / mood
        mood_dir.mkdir(parents=True, exist_ok=True)
        for name in names:
            (mood_dir / name).write_bytes(b"RIFFfake-audio-" + name.encode())
    return root


class LiveServer:
    """Run the app under uvicorn on an ephemeral loopback port.

    Needed wherever a test must read a response while the server is still
    producing it (the in-process test client buffers whole responses).
    """

    def __init__(self, app):
        config = uvicorn.Config(
            app, host="127.0.0.1", port=0, log_level="warning", lifespan="off"
        )
        self.server = uvicorn.Server(config)
        self.thread = threading.Thread(target=self.server.run, daemon=True)

    def __enter__(self) -> str:
        self.thread.start()
        deadline = time.monotonic() + 5.0
        while not self.server.started:
            if time.monotonic() > deadline:
                raise RuntimeError("uvicorn did not start in time")
            time.sleep(0.01)
        port = self.server.servers[0].sockets[0].getsockname()[1]
        return f"http://127.0.0.1:{port}"

    def __exit__(self, *exc) -> None:
        self.server.should_exit = True
        self.thread.join(timeout=5)


@pytest.fixture
def library_root(tmp_path):
    return build_library_tree(tmp_path / "library")


@pytest.fixture
def fake_clock():
    return FakeClock()
