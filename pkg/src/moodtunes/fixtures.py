"""Deterministic stand-ins for the detector and the emotion backend.

A fixture frame is an ordinary PNG whose text metadata carries its own
annotations: the ``fixture`` entry holds one ``label@confidence`` item per
face, laid out as equal-width cells left to right. The grid detector derives
face regions from that layout and the fixture backend resolves each region
back to its annotation, so the whole pipeline runs model-free and produces
bit-identical results for identical inputs.

Annotations can also live in a sidecar labels file (one line per fixture key,
``key=label@confidence``, multi-face keys separated by commas); images are
then matched by the ``fixture-key`` metadata entry, which corpus loading
derives from the file stem.
"""

from __future__ import annotations

import base64
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from PIL import Image
from PIL.PngImagePlugin import PngInfo

from .emotions import EMOTIONS, EmotionDistribution
from .frame_pipeline import BackendFailure, FaceRegion, RasterImage

FIXTURE_META_KEY = "fixture"
FIXTURE_ID_KEY = "fixture-key"

CELL_PX = 64

# One fill color per cell index so synthesized frames are visually distinct.
_PALETTE = [
    (239, 83, 80),
    (66, 165, 245),
    (102, 187, 106),
    (255, 202, 40),
    (171, 71, 188),
    (38, 198, 218),
]


@dataclass(frozen=True)
class Annotation:
    """One face's scripted emotion: a label plus its confidence in [0, 1]."""

    label: str
    confidence: float

    def __post_init__(self) -> None:
        if self.label not in EMOTIONS:
            raise ValueError(f"unknown emotion label {self.label!r}")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence out of [0, 1]: {self.confidence}")

    def distribution(self) -> EmotionDistribution:
        """The annotated score, remainder spread uniformly over the other six."""
        rest = (1.0 - self.confidence) / (len(EMOTIONS) - 1)
        return EmotionDistribution(
            {label: self.confidence if label == self.label else rest for label in EMOTIONS}
        )

    def __str__(self) -> str:
        return f"{self.label}@{self.confidence}"


def parse_annotation(text: str) -> Annotation:
    """Parse one ``label@confidence`` item, e.g. ``happy@0.9``."""
    label, sep, conf = text.strip().partition("@")
    if not sep:
        raise ValueError(f"annotation {text!r} is not of the form label@confidence")
    try:
        confidence = float(conf)
    except ValueError as exc:
        raise ValueError(f"annotation {text!r} has a non-numeric confidence") from exc
    return Annotation(label=label.strip(), confidence=confidence)


def parse_annotations(text: str) -> list[Annotation]:
    """Parse a ``;`` or ``,`` separated list of annotations."""
    items = text.replace(",", ";").split(";")
    parsed = [parse_annotation(item) for item in items if item.strip()]
    if not parsed:
        raise ValueError(f"no annotations in {text!r}")
    return parsed


def load_labels_file(path: str | Path) -> dict[str, list[Annotation]]:
    """Read a plain-text mapping file: one line per fixture key.

    Lines look like ``key=label@confidence`` (multi-face keys carry a
    comma-separated list). Blank lines and ``#`` comments are skipped;
    repeated keys extend the annotation list.
    """
    labels: dict[str, list[Annotation]] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{lineno}: expected key=label@confidence, got {line!r}")
        labels.setdefault(key.strip(), []).extend(parse_annotations(value))
    return labels


def make_fixture_image(
    annotations: Sequence[Annotation | str],
    key: str | None = None,
    cell_px: int = CELL_PX,
    embed_annotations: bool = True,
) -> bytes:
    """Synthesize a PNG fixture frame: one colored cell per annotated face.

    The annotations ride along in the PNG text metadata (unless
    ``embed_annotations`` is off, for sidecar-labels corpora), and ``key``
    lands in the ``fixture-key`` entry.
    """
    anns = [a if isinstance(a, Annotation) else parse_annotation(a) for a in annotations]
    if not anns:
        raise ValueError("at least one annotation required")
    img = Image.new("RGB", (cell_px * len(anns), cell_px))
    for i in range(len(anns)):
        color = _PALETTE[i % len(_PALETTE)]
        img.paste(color, (i * cell_px, 0, (i + 1) * cell_px, cell_px))
    info = PngInfo()
    if embed_annotations:
        info.add_text(FIXTURE_META_KEY, ";".join(str(a) for a in anns))
    if key is not None:
        info.add_text(FIXTURE_ID_KEY, key)
    buf = io.BytesIO()
    img.save(buf, format="PNG", pnginfo=info)
    return buf.getvalue()


def to_base64(raw: bytes) -> str:
    return base64.b64encode(raw).decode("ascii")


class StubDetector:
    """Returns the same configured regions for every image."""

    def __init__(self, regions: Iterable[FaceRegion | tuple[int, int, int, int]]) -> None:
        self.regions = [
            r if isinstance(r, FaceRegion) else FaceRegion(*r) for r in regions
        ]

    def detect(self, image: RasterImage) -> list[FaceRegion]:
        return list(self.regions)


class FixtureGridDetector:
    """Derives face cells from fixture metadata; no metadata means no faces."""

    def __init__(self, labels: Mapping[str, Sequence[Annotation]] | None = None) -> None:
        self.labels = dict(labels or {})

    def detect(self, image: RasterImage) -> list[FaceRegion]:
        annotations = resolve_annotations(image, self.labels)
        if not annotations:
            return []
        count = len(annotations)
        cell_w = image.width // count
        if cell_w < 1:
            return []
        return [
            FaceRegion(x=i * cell_w, y=0, width=cell_w, height=image.height)
            for i in range(count)
        ]


class FixtureBackend:
    """Deterministic emotion backend driven by annotations instead of a model.

    Resolution order for a (image, region) query: an exact region-keyed
    annotation, then the image's own annotations (inline metadata or the
    labels mapping via ``fixture-key``) indexed by cell position, then the
    constant fallback. A face with no annotation raises BackendFailure, which
    the frame pipeline treats as a dropped face.
    """

    def __init__(
        self,
        labels: Mapping[str, Sequence[Annotation]] | None = None,
        constant: Annotation | None = None,
        by_region: Mapping[tuple[int, int, int, int], Annotation] | None = None,
    ) -> None:
        self.labels = dict(labels or {})
        self.constant = constant
        self.by_region = dict(by_region or {})

    @classmethod
    def constant_label(cls, label: str, confidence: float) -> "FixtureBackend":
        """Backend keyed to a single annotation applied to every face."""
        return cls(constant=Annotation(label=label, confidence=confidence))

    def classify(self, image: RasterImage, region: FaceRegion) -> Mapping[str, float]:
        annotation = self.by_region.get(region.as_tuple())
        if annotation is None:
            annotations = resolve_annotations(image, self.labels)
            if annotations:
                annotation = annotations[_cell_index(image, region, len(annotations))]
            else:
                annotation = self.constant
        if annotation is None:
            raise BackendFailure(
                f"no fixture annotation for region {region.as_tuple()}"
            )
        return annotation.distribution().scores


def resolve_annotations(
    image: RasterImage, labels: Mapping[str, Sequence[Annotation]]
) -> list[Annotation]:
    """Annotations for an image: inline metadata first, then the labels mapping."""
    inline = image.meta.get(FIXTURE_META_KEY)
    if inline:
        return parse_annotations(inline)
    key = image.meta.get(FIXTURE_ID_KEY)
    if key is not None and key in labels:
        return list(labels[key])
    return []


def _cell_index(image: RasterImage, region: FaceRegion, count: int) -> int:
    if count == 1:
        return 0
    cell_w = max(1, image.width // count)
    center_x = region.x + region.width // 2
    return min(count - 1, center_x // cell_w)
