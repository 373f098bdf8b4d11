#!/usr/bin/env python3
"""Generate a playable demo library (sine-tone WAVs per mood) plus config.

Gives the service and the web UI something audible to loop without shipping
real music. Each mood directory gets a few short tones at mood-flavored
pitches; a ready-to-use ``config.yml`` lands next to the library.
"""

import argparse
import math
import wave
from pathlib import Path

RATE = 22_050

MOOD_TONES = {
    "happy": [(523.25, "sunny"), (659.25, "bright"), (783.99, "skip")],
    "sad": [(220.0, "gray"), (246.94, "rain"), (196.0, "slow")],
    "angry": [(440.0, "sharp"), (466.16, "storm")],
    "calm": [(329.63, "drift"), (293.66, "still")],
}

CONFIG_TEMPLATE = """\
library_root: {library_dir}
capture_interval_ms: 3000
aggregation_strategy: highest_percentage
smoothing_capacity: 3
override_lockout_s: 120
min_frame_spacing_ms: 500
backend: fixture
detector: cascade
"""


def write_tone(path: Path, freq: float, seconds: float = 4.0, volume: float = 0.4) -> None:
    frames = bytearray()
    total = int(RATE * seconds)
    for i in range(total):
        fade = min(1.0, i / 800, (total - i) / 800)  # declick
        value = int(32767 * volume * fade * math.sin(2 * math.pi * freq * i / RATE))
        frames += value.to_bytes(2, "little", signed=True)
    with wave.open(str(path), "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(RATE)
        w.writeframes(bytes(frames))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out_dir", type=Path, help="demo directory to create")
    args = parser.parse_args()

    library = args.out_dir / "library"
    for mood, tones in MOOD_TONES.items():
        mood_dir = library / mood
        mood_dir.mkdir(parents=True, exist_ok=True)
        for freq, name in tones:
            write_tone(mood_dir / f"{name}.wav", freq)
    config_path = args.out_dir / "config.yml"
    config_path.write_text(CONFIG_TEMPLATE.format(library_dir="library"))
    print(f"demo library at {library}")
    print(f"run: python scripts/run_server.py --config {config_path}")


if __name__ == "__main__":
    main()
