#!/usr/bin/env python3
"""Write the deterministic demo stem pair used by the examples and tests.

Usage: python scripts/make_demo_stems.py [out_dir] [--duration SECONDS]
"""

import argparse
from pathlib import Path

from tailors.synth import write_demo_stems


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out_dir", nargs="?", default="demo_data", help="output directory")
    parser.add_argument("--duration", type=float, default=30.0)
    parser.add_argument("--track-id", default="demo")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    vocal, background = write_demo_stems(
        Path(args.out_dir),
        track_id=args.track_id,
        duration_s=args.duration,
        seed=args.seed,
    )
    print(f"wrote {vocal}")
    print(f"wrote {background}")


if __name__ == "__main__":
    main()
