#!/usr/bin/env python3
"""Launch the moodtunes service from a YAML config file."""

import argparse
from pathlib import Path

import uvicorn

from moodtunes.config import load_app_config
from moodtunes.service_api import create_app


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--config", default="config.yml", help="service config document")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8765)
    args = parser.parse_args()

    config = load_app_config(Path(args.config))
    app = create_app(config)
    uvicorn.run(app, host=args.host, port=args.port)


if __name__ == "__main__":
    main()
