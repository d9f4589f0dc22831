#!/usr/bin/env python3
"""Write the deterministic synthetic survey CSV (27 participants, 20 musics).

Usage: python scripts/make_demo_survey.py [out_path]
"""

import argparse
from pathlib import Path

from tailors.synth import write_demo_survey


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "out_path", nargs="?", default="demo_data/survey.csv", help="output CSV path"
    )
    parser.add_argument("--seed", type=int, default=23)
    args = parser.parse_args()

    path = Path(args.out_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    written = write_demo_survey(path, seed=args.seed)
    print(f"wrote {written}")


if __name__ == "__main__":
    main()
