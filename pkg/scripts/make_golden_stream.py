#!/usr/bin/env python3
"""Regenerate the display client's golden frame stream fixture.

Runs the real analyze pipeline on 10 s of deterministic synthetic stems,
yielding exactly 300 frames at 30 fps with several background kind changes.

Usage: python scripts/make_golden_stream.py [out_path]
"""

import argparse
import json
import tempfile
from pathlib import Path

from tailors.cli import cli_run
from tailors.synth import write_demo_stems

DEFAULT_OUT = Path(__file__).resolve().parent.parent / "frontend/tests/fixtures/golden.ndjson"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out_path", nargs="?", default=str(DEFAULT_OUT))
    args = parser.parse_args()

    out = Path(args.out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        vocal, background = write_demo_stems(
            Path(tmp), track_id="golden", duration_s=10.0, seed=7
        )
        code = cli_run(
            ["analyze", "--vocal", str(vocal), "--background", str(background),
             "-o", str(out)]
        )
    if code != 0:
        raise SystemExit(code)

    lines = out.read_text().splitlines()
    kinds = [json.loads(line)["background"]["kind"] for line in lines[1:]]
    changes = sum(1 for a, b in zip(kinds, kinds[1:]) if a != b)
    print(f"{out}: {len(lines) - 1} frames, kinds {sorted(set(kinds))}, {changes} kind changes")


if __name__ == "__main__":
    main()
