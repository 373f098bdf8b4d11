"""Batch analysis over an image corpus: both aggregation strategies, CSV out.

For every image the tool records the label each strategy picks, then tallies
global per-label counts per strategy. Images where no face is detected are
listed separately and excluded from the counts. Output is byte-deterministic:
rows sort by image id regardless of processing order.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from PIL import Image, UnidentifiedImageError

from .aggregation import (
    AggregationStrategy,
    aggregate_highest_percentage,
    aggregate_most_frequent,
)
from .emotions import EMOTIONS
from .fixtures import FIXTURE_ID_KEY, FixtureBackend, FixtureGridDetector, load_labels_file
from .frame_pipeline import (
    FaceDetector,
    EmotionBackend,
    FaceReading,
    FrameReading,
    RasterImage,
    classify_emotions,
    detect_faces,
)
from .inference import CascadeFaceDetector, DeepFaceBackend

log = logging.getLogger(__name__)

IMAGE_EXTENSIONS = {".png", ".jpg", ".jpeg"}

DEFAULT_LABELS_NAME = "labels.txt"

BOTH_STRATEGIES = (
    AggregationStrategy.HIGHEST_PERCENTAGE,
    AggregationStrategy.MOST_FREQUENT,
)


class EmptyCorpus(Exception):
    """The corpus directory holds no readable image."""


class IoFailure(Exception):
    """Writing the report failed."""


@dataclass(frozen=True)
class ImageResult:
    image_id: str
    highest: str | None  # None when the strategy was not requested
    most_frequent: str | None


@dataclass
class AnalysisReport:
    strategies: tuple[AggregationStrategy, ...]
    results: list[ImageResult] = field(default_factory=list)
    zero_face: list[str] = field(default_factory=list)
    counts: dict[str, Counter] = field(default_factory=dict)


def iter_corpus_images(corpus_dir: str | Path) -> list[Path]:
    corpus_dir = Path(corpus_dir)
    return sorted(
        (p for p in corpus_dir.iterdir()
         if p.is_file() and p.suffix.lower() in IMAGE_EXTENSIONS),
        key=lambda p: p.name,
    )


def load_corpus_image(path: Path) -> RasterImage:
    """Decode one corpus file; the file stem becomes the fixture key."""
    with Image.open(path) as img:
        img.load()
        meta = {k: v for k, v in img.info.items() if isinstance(v, str)}
        pixels = np.asarray(img.convert("RGB"))
    meta.setdefault(FIXTURE_ID_KEY, path.stem)
    return RasterImage(pixels=pixels, meta=meta)


def _analyze_one(
    path: Path, detector: FaceDetector, backend: EmotionBackend
) -> tuple[str, FrameReading | None]:
    image_id = path.stem
    try:
        image = load_corpus_image(path)
    except (UnidentifiedImageError, OSError) as exc:
        log.warning("skipping unreadable image %s: %s", path.name, exc)
        return image_id, None
    regions = detect_faces(image, detector)
    faces = []
    for region in regions:
        try:
            faces.append(FaceReading(region, classify_emotions(image, region, backend)))
        except Exception as exc:
            log.warning("dropping face %s in %s: %s", region.as_tuple(), path.name, exc)
    return image_id, FrameReading(captured_at=0, faces=tuple(faces))


def analyze_corpus(
    corpus_dir: str | Path,
    detector: FaceDetector,
    backend: EmotionBackend,
    strategies: Sequence[AggregationStrategy] = BOTH_STRATEGIES,
    images: Sequence[Path] | None = None,
    workers: int = 1,
) -> AnalysisReport:
    """Run the requested strategies over every corpus image.

    ``images`` overrides discovery (any order; the report sorts by image id).
    Processing may fan out over ``workers`` threads; the assembled report is
    identical regardless of order.

    Raises:
        EmptyCorpus: no readable image in the corpus.
    """
    paths = list(images) if images is not None else iter_corpus_images(corpus_dir)
    if not paths:
        raise EmptyCorpus(f"no images found under {corpus_dir}")

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            readings = list(pool.map(lambda p: _analyze_one(p, detector, backend), paths))
    else:
        readings = [_analyze_one(p, detector, backend) for p in paths]

    report = AnalysisReport(strategies=tuple(strategies))
    report.counts = {s.value: Counter() for s in strategies}
    analyzed = 0
    for image_id, reading in readings:
        if reading is None:
            continue
        analyzed += 1
        if not reading.faces:
            report.zero_face.append(image_id)
            continue
        highest = most_frequent = None
        if AggregationStrategy.HIGHEST_PERCENTAGE in report.strategies:
            highest = aggregate_highest_percentage(reading).label
            report.counts[AggregationStrategy.HIGHEST_PERCENTAGE.value][highest] += 1
        if AggregationStrategy.MOST_FREQUENT in report.strategies:
            most_frequent = aggregate_most_frequent(reading).label
            report.counts[AggregationStrategy.MOST_FREQUENT.value][most_frequent] += 1
        report.results.append(ImageResult(image_id, highest, most_frequent))
    if analyzed == 0:
        raise EmptyCorpus(f"no readable images under {corpus_dir}")

    report.results.sort(key=lambda r: r.image_id)
    report.zero_face.sort()
    return report


def write_report(report: AnalysisReport, out_path: str | Path) -> None:
    """Write the per-image table plus per-strategy summary blocks as CSV.

    Byte-identical output for identical reports: fixed section order, rows
    sorted by image id, summary labels in canonical emotion order.

    Raises:
        IoFailure: the output file cannot be written.
    """
    try:
        with Path(out_path).open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["image_id", "highest_percentage", "most_frequent"])
            for result in report.results:
                writer.writerow(
                    [result.image_id, result.highest or "", result.most_frequent or ""]
                )
            writer.writerow([])
            writer.writerow(["summary", "strategy", "label", "count"])
            for strategy in report.strategies:
                counts = report.counts[strategy.value]
                for label in EMOTIONS:
                    if counts[label]:
                        writer.writerow(["summary", strategy.value, label, counts[label]])
            if report.zero_face:
                writer.writerow([])
                writer.writerow(["zero_face", "image_id"])
                for image_id in report.zero_face:
                    writer.writerow(["zero_face", image_id])
    except OSError as exc:
        raise IoFailure(f"cannot write report to {out_path}: {exc}") from exc


def _strategies_for(choice: str) -> tuple[AggregationStrategy, ...]:
    return {
        "both": BOTH_STRATEGIES,
        "highest": (AggregationStrategy.HIGHEST_PERCENTAGE,),
        "frequent": (AggregationStrategy.MOST_FREQUENT,),
    }[choice]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="moodtunes-corpus",
        description="Batch emotion aggregation over an image corpus.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    analyze = sub.add_parser("analyze", help="analyze a corpus directory")
    analyze.add_argument("--corpus", required=True, help="directory of images")
    analyze.add_argument(
        "--backend", choices=("real", "fixture"), default="fixture",
        help="real = cascade detector + pretrained emotion model; "
             "fixture = annotation-driven, model-free",
    )
    analyze.add_argument(
        "--strategy", choices=("both", "highest", "frequent"), default="both"
    )
    analyze.add_argument("--out", required=True, help="CSV report path")
    analyze.add_argument(
        "--labels", default=None,
        help=f"fixture labels file (default: <corpus>/{DEFAULT_LABELS_NAME} when present)",
    )
    analyze.add_argument("--workers", type=int, default=1)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    corpus = Path(args.corpus)
    if not corpus.is_dir():
        print(f"error: corpus directory {corpus} does not exist", file=sys.stderr)
        return 1

    if args.backend == "real":
        detector: FaceDetector = CascadeFaceDetector()
        backend: EmotionBackend = DeepFaceBackend()
    else:
        labels_path = Path(args.labels) if args.labels else corpus / DEFAULT_LABELS_NAME
        labels = load_labels_file(labels_path) if labels_path.is_file() else {}
        detector = FixtureGridDetector(labels)
        backend = FixtureBackend(labels)

    try:
        report = analyze_corpus(
            corpus,
            detector,
            backend,
            strategies=_strategies_for(args.strategy),
            workers=args.workers,
        )
        write_report(report, args.out)
    except (EmptyCorpus, IoFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    analyzed = len(report.results) + len(report.zero_face)
    print(f"analyzed {analyzed} images -> {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
