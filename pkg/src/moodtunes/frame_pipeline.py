"""Frame ingestion pipeline: decode an image payload, find faces, score emotions.

All operations here are stateless; detector and backend handles are supplied by
the caller and must be safe for concurrent use. Concurrent ``analyze_frame``
calls on distinct submissions never interfere. Decoded image data lives only
for the duration of a call and is never persisted.
"""

from __future__ import annotations

import base64
import binascii
import io
import logging
import time
from dataclasses import dataclass, field
from typing import Mapping, Protocol, runtime_checkable

import numpy as np
from PIL import Image, UnidentifiedImageError

from .emotions import EMOTIONS, SUM_TOLERANCE, EmotionDistribution
from .metrics import MetricsRegistry

log = logging.getLogger(__name__)


class FramePipelineError(Exception):
    """Base class for pipeline failures."""


class EmptyPayload(FramePipelineError):
    """The submitted payload is empty (or decodes to zero bytes)."""


class InvalidEncoding(FramePipelineError):
    """The payload is not valid base64 text."""


class UnsupportedImageFormat(FramePipelineError):
    """The payload decodes to bytes that are not a known raster format."""


class DetectorUnavailable(FramePipelineError):
    """The face detector resource failed to load."""


class BackendFailure(FramePipelineError):
    """The emotion inference backend raised."""


class NormalizationFailure(BackendFailure):
    """The backend returned scores that cannot be normalized (all zero)."""


@dataclass(frozen=True)
class RasterImage:
    """Decoded image: HxWx3 uint8 RGB pixels plus any string metadata entries."""

    pixels: np.ndarray
    meta: Mapping[str, str] = field(default_factory=dict)

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])


@dataclass(frozen=True)
class FrameSubmission:
    """One frame posted by a capture client.

    ``image_payload`` is base64 text of PNG or JPEG bytes; ``captured_at`` is a
    wall-clock timestamp in milliseconds. Within a session, ``captured_at`` must
    never decrease (enforced by the service layer).
    """

    session_id: str
    image_payload: str
    captured_at: int


@dataclass(frozen=True)
class FaceRegion:
    """Axis-aligned face rectangle in source-image pixel coordinates."""

    x: int
    y: int
    width: int
    height: int

    def __post_init__(self) -> None:
        if self.x < 0 or self.y < 0:
            raise ValueError(f"region offsets must be non-negative: {self}")
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"region extent must be positive: {self}")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.x, self.y, self.width, self.height)

    def within(self, image: RasterImage) -> bool:
        return self.x + self.width <= image.width and self.y + self.height <= image.height


@dataclass(frozen=True)
class FaceReading:
    region: FaceRegion
    distribution: EmotionDistribution


@dataclass(frozen=True)
class FrameReading:
    """Per-frame result: all detected faces with their emotion distributions.

    Face regions are pairwise distinct and appear in detector output order.
    """

    captured_at: int
    faces: tuple[FaceReading, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "faces", tuple(self.faces))
        rects = [face.region.as_tuple() for face in self.faces]
        if len(set(rects)) != len(rects):
            raise ValueError("face regions must be pairwise distinct")


@runtime_checkable
class FaceDetector(Protocol):
    """Locates face rectangles in a decoded image."""

    def detect(self, image: RasterImage) -> list[FaceRegion]: ...


@runtime_checkable
class EmotionBackend(Protocol):
    """Scores one face region; returns raw per-label confidences (any scale)."""

    def classify(self, image: RasterImage, region: FaceRegion) -> Mapping[str, float]: ...


_DATA_URL_MARKER = ";base64,"


def decode_frame(submission: FrameSubmission) -> RasterImage:
    """Decode a submitted payload into an RGB raster.

    Accepts plain base64 text or a full ``data:image/...;base64,`` URL. PNG text
    chunks (and other string metadata) survive into ``RasterImage.meta``.

    Raises:
        EmptyPayload: payload is empty or decodes to zero bytes.
        InvalidEncoding: payload is not valid base64 text.
        UnsupportedImageFormat: bytes are not a decodable raster image.
    """
    payload = submission.image_payload.strip()
    if payload.startswith("data:") and _DATA_URL_MARKER in payload:
        payload = payload.split(_DATA_URL_MARKER, 1)[1]
    if not payload:
        raise EmptyPayload("empty image payload")
    try:
        raw = base64.b64decode(payload, validate=True)
    except (binascii.Error, ValueError) as exc:
        raise InvalidEncoding(f"payload is not valid base64: {exc}") from exc
    if not raw:
        raise EmptyPayload("payload decodes to zero bytes")
    try:
        with Image.open(io.BytesIO(raw)) as img:
            img.load()
            meta = {k: v for k, v in img.info.items() if isinstance(v, str)}
            pixels = np.asarray(img.convert("RGB"))
    except UnidentifiedImageError as exc:
        raise UnsupportedImageFormat("bytes are not a known raster format") from exc
    except OSError as exc:
        raise UnsupportedImageFormat(f"raster data is corrupt: {exc}") from exc
    if pixels.size == 0:
        raise UnsupportedImageFormat("decoded raster has no pixels")
    return RasterImage(pixels=pixels, meta=meta)


def detect_faces(image: RasterImage, detector: FaceDetector) -> list[FaceRegion]:
    """Run the detector and return regions valid for this image.

    An empty list means "no face found" and is not an error. Duplicate
    rectangles are dropped (first occurrence wins) and regions that fall
    outside the image bounds are discarded, so every returned region satisfies
    the FaceRegion invariants against this image.
    """
    regions = detector.detect(image)
    seen: set[tuple[int, int, int, int]] = set()
    valid: list[FaceRegion] = []
    for region in regions:
        key = region.as_tuple()
        if key in seen:
            continue
        if not region.within(image):
            log.debug("dropping out-of-bounds region %s for %dx%d image",
                      key, image.width, image.height)
            continue
        seen.add(key)
        valid.append(region)
    return valid


def classify_emotions(
    image: RasterImage, region: FaceRegion, backend: EmotionBackend
) -> EmotionDistribution:
    """Score one face and normalize the backend's output to a distribution.

    Backends may return confidences on any non-negative scale (percentages
    included); normalization to sum 1 happens here, at the adapter boundary.

    Raises:
        BackendFailure: inference raised, or returned negative scores.
        NormalizationFailure: backend returned all-zero scores.
    """
    if not region.within(image):
        raise ValueError(f"region {region.as_tuple()} lies outside the image")
    try:
        raw = backend.classify(image, region)
    except BackendFailure:
        raise
    except Exception as exc:
        raise BackendFailure(f"emotion backend raised: {exc}") from exc
    scores = {label: float(raw.get(label, 0.0)) for label in EMOTIONS}
    if any(v < 0.0 for v in scores.values()):
        raise BackendFailure(f"backend returned negative confidences: {scores}")
    total = sum(scores.values())
    if total <= 0.0:
        raise NormalizationFailure("backend returned all-zero scores")
    if abs(total - 1.0) > SUM_TOLERANCE:
        scores = {label: v / total for label, v in scores.items()}
    return EmotionDistribution(scores)


def analyze_frame(
    submission: FrameSubmission,
    detector: FaceDetector,
    backend: EmotionBackend,
    metrics: MetricsRegistry | None = None,
) -> FrameReading:
    """Full per-frame pass: decode, detect, classify every face.

    Decode and detector errors propagate; a per-face backend failure drops
    that face (logged) without failing the frame, so the live loop keeps
    running. Stage timings are recorded when a metrics registry is given.
    """
    t0 = time.perf_counter()
    image = decode_frame(submission)
    if metrics is not None:
        metrics.record("decode", (time.perf_counter() - t0) * 1000.0)

    t1 = time.perf_counter()
    regions = detect_faces(image, detector)
    if metrics is not None:
        metrics.record("detect", (time.perf_counter() - t1) * 1000.0)

    faces: list[FaceReading] = []
    for region in regions:
        t2 = time.perf_counter()
        try:
            distribution = classify_emotions(image, region, backend)
        except BackendFailure as exc:
            log.warning("dropping face %s: %s", region.as_tuple(), exc)
            continue
        if metrics is not None:
            metrics.record("classify", (time.perf_counter() - t2) * 1000.0)
        faces.append(FaceReading(region=region, distribution=distribution))
    return FrameReading(captured_at=submission.captured_at, faces=tuple(faces))
