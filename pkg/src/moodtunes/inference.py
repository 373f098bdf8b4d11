"""Production detector and emotion-backend implementations.

The face detector runs a boosted-cascade frontal-face classifier (the
Viola-Jones family). It is built on scikit-image's bundled trained cascade:
current OpenCV wheels (5.x) dropped both the classic ``CascadeClassifier`` API
and the cascade XML data files, while the scikit-image file ships with the
package and works offline. Detection parameters are configuration, with
defaults picked for a single clean hit on the bundled frontal portrait.

The emotion backend wraps the DeepFace analyzer when that optional dependency
is installed; everything else in the system runs without it via the fixture
backend.
"""

from __future__ import annotations

import logging
import threading
from typing import Mapping

from .frame_pipeline import (
    BackendFailure,
    DetectorUnavailable,
    FaceRegion,
    RasterImage,
)

log = logging.getLogger(__name__)

MIN_FACE_PX = 30


class CascadeFaceDetector:
    """Frontal-face detection with a pretrained boosted cascade.

    Deterministic: identical pixels yield identical regions. The trained
    cascade file loads lazily on first use; a load failure surfaces as
    DetectorUnavailable. Thread-safe after the first successful load.
    """

    def __init__(
        self,
        cascade_path: str | None = None,
        scale_factor: float = 1.2,
        step_ratio: float = 1.0,
        min_size: tuple[int, int] = (MIN_FACE_PX, MIN_FACE_PX),
        max_size: tuple[int, int] | None = None,
    ) -> None:
        self.cascade_path = cascade_path
        self.scale_factor = scale_factor
        self.step_ratio = step_ratio
        self.min_size = min_size
        self.max_size = max_size
        self._cascade = None
        self._load_lock = threading.Lock()

    def _load(self):
        with self._load_lock:
            if self._cascade is not None:
                return self._cascade
            try:
                from skimage import data as skdata
                from skimage.feature import Cascade
            except ImportError as exc:
                raise DetectorUnavailable(f"cascade engine unavailable: {exc}") from exc
            path = self.cascade_path or skdata.lbp_frontal_face_cascade_filename()
            try:
                self._cascade = Cascade(path)
            except Exception as exc:
                raise DetectorUnavailable(
                    f"trained cascade file {path!r} failed to load: {exc}"
                ) from exc
            return self._cascade

    def detect(self, image: RasterImage) -> list[FaceRegion]:
        cascade = self._load()
        max_size = self.max_size or (image.width, image.height)
        found = cascade.detect_multi_scale(
            img=image.pixels,
            scale_factor=self.scale_factor,
            step_ratio=self.step_ratio,
            min_size=self.min_size,
            max_size=max_size,
        )
        return [
            FaceRegion(
                x=int(hit["c"]),
                y=int(hit["r"]),
                width=int(hit["width"]),
                height=int(hit["height"]),
            )
            for hit in found
        ]


class DeepFaceBackend:
    """Adapter around the DeepFace emotion analyzer (optional dependency).

    Returns the analyzer's raw per-label percentages; normalization happens
    downstream at the pipeline's adapter boundary.
    """

    def __init__(self) -> None:
        self._analyze = None

    def _load(self):
        if self._analyze is None:
            try:
                from deepface import DeepFace
            except ImportError as exc:
                raise BackendFailure(
                    "deepface is not installed; use the fixture backend or "
                    "install the 'deepface' extra"
                ) from exc
            self._analyze = DeepFace.analyze
        return self._analyze

    def classify(self, image: RasterImage, region: FaceRegion) -> Mapping[str, float]:
        analyze = self._load()
        roi = image.pixels[
            region.y : region.y + region.height, region.x : region.x + region.width
        ]
        bgr = roi[:, :, ::-1]  # analyzer expects BGR arrays
        result = analyze(
            bgr, actions=["emotion"], enforce_detection=False, detector_backend="skip"
        )
        if isinstance(result, list):
            result = result[0]
        return dict(result["emotion"])
