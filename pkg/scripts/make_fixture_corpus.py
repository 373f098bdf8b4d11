#!/usr/bin/env python3
"""Generate a synthetic fixture corpus: annotated PNGs plus a labels file.

The corpus exercises both aggregation strategies without any model: every
image carries 1-4 scripted faces, and a sidecar ``labels.txt`` maps image
stems to their annotations (one line per key, ``key=label@conf,...``).
"""

import argparse
import random
from pathlib import Path

from moodtunes.emotions import EMOTIONS
from moodtunes.fixtures import make_fixture_image


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out_dir", type=Path, help="corpus directory to create")
    parser.add_argument("--images", type=int, default=34)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    lines = []
    for i in range(args.images):
        stem = f"group_{i:03d}"
        n_faces = rng.randint(1, 4)
        annotations = [
            f"{EMOTIONS[rng.randrange(len(EMOTIONS))]}@{round(rng.uniform(0.3, 0.99), 2)}"
            for _ in range(n_faces)
        ]
        png = make_fixture_image(annotations, embed_annotations=False)
        (args.out_dir / f"{stem}.png").write_bytes(png)
        lines.append(f"{stem}={','.join(annotations)}")
    (args.out_dir / "labels.txt").write_text("\n".join(lines) + "\n")
    print(f"wrote {args.images} images + labels.txt to {args.out_dir}")


if __name__ == "__main__":
    main()
