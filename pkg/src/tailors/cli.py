"""Command-line entry points.

Subcommands:
  analyze   stems -> frame stream file
  features  stems -> raw per-hop feature lines (NDJSON)
  serve     frame stream file -> live WebSocket broadcast
  stats     survey CSV -> report tables

Exit codes: 0 on success, 1 on a pipeline or I/O failure, 2 on bad usage.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .audio_io import load_stem_pair
from .config import load_config
from .errors import TailorsError
from .features import FEATURE_NAMES, extract_track_features
from .mapping import map_track
from .stats.reports import build_reports, render_report_files
from .stats.survey import load_survey_csv
from .stream import StreamHeader, emit_to_path, parse_stream_path, serve_stream
from .synth import VOCAL_SUFFIX


def _track_id_from(vocal_path: str) -> str:
    name = Path(vocal_path).name
    if name.endswith(VOCAL_SUFFIX):
        return name[: -len(VOCAL_SUFFIX)]
    return Path(vocal_path).stem


def _cmd_analyze(args: argparse.Namespace) -> int:
    config = load_config()
    fps = args.fps if args.fps is not None else config.fps
    alpha = args.alpha if args.alpha is not None else config.smoothing_alpha
    stems = load_stem_pair(args.vocal, args.background)
    series = extract_track_features(stems, config)
    frames = map_track(series, fps=fps, smoothing_alpha=alpha, config=config)
    track_id = args.track_id or _track_id_from(args.vocal)
    header = StreamHeader(fps=fps, duration_s=series.duration_s, track_id=track_id)
    emit_to_path(frames, header, args.out)
    print(f"wrote {len(frames)} frames to {args.out}")
    return 0


def _cmd_features(args: argparse.Namespace) -> int:
    config = load_config()
    stems = load_stem_pair(args.vocal, args.background)
    series = extract_track_features(stems, config)
    with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
        for k, frame in enumerate(series.frames):
            record = {"t": round(k * series.hop_seconds, 6)}
            record.update({name: round(getattr(frame, name), 6) for name in FEATURE_NAMES})
            handle.write(json.dumps(record, separators=(",", ":")) + "\n")
    print(f"wrote {len(series.frames)} feature rows to {args.out}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    header, frames = parse_stream_path(args.frames)
    server = serve_stream(frames, header, port=args.port, host=args.host)
    print(f"serving {header.track_id} on ws://{server.host}:{server.port} "
          f"({len(frames)} frames at {header.fps} fps)")
    print("playback starts when the first client connects; Ctrl-C stops")
    try:
        while True:
            time.sleep(0.5)
    except KeyboardInterrupt:
        pass
    finally:
        server.stop()
    return 0


def _cmd_stats(args: argparse.Namespace) -> int:
    records = load_survey_csv(args.survey)
    bundle = build_reports(
        records,
        wilcoxon_pairing=args.pairing,
        drop_ivs=tuple(args.drop_iv or ()),
    )
    written = render_report_files(bundle, args.out)
    print(f"{len(records)} records -> {len(written)} report files in {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tailors",
        description="Stem timbre analysis, visual mapping, frame streaming, survey stats",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="stems -> frame stream file")
    analyze.add_argument("--vocal", required=True, help="path to the vocal stem WAV")
    analyze.add_argument("--background", required=True, help="path to the background stem WAV")
    analyze.add_argument("-o", "--out", required=True, help="output stream path (NDJSON)")
    analyze.add_argument("--fps", type=float, default=None, help="frame rate (default 30)")
    analyze.add_argument("--alpha", type=float, default=None, help="smoothing alpha (default 0.2)")
    analyze.add_argument("--track-id", default=None, help="track id for the stream header")
    analyze.set_defaults(func=_cmd_analyze)

    features = sub.add_parser("features", help="stems -> raw feature rows")
    features.add_argument("--vocal", required=True)
    features.add_argument("--background", required=True)
    features.add_argument("-o", "--out", required=True)
    features.set_defaults(func=_cmd_features)

    serve = sub.add_parser("serve", help="broadcast a stream file over WebSocket")
    serve.add_argument("--frames", required=True, help="frame stream file from analyze")
    serve.add_argument("--port", type=int, default=8765)
    serve.add_argument("--host", default="127.0.0.1")
    serve.set_defaults(func=_cmd_serve)

    stats = sub.add_parser("stats", help="survey CSV -> report tables")
    stats.add_argument("--survey", required=True, help="survey CSV path")
    stats.add_argument("--out", required=True, help="directory for report files")
    stats.add_argument("--pairing", choices=("music", "participant"), default="music")
    stats.add_argument(
        "--drop-iv",
        action="append",
        metavar="NAME",
        help="drop a predictor from the regressions (repeatable)",
    )
    stats.set_defaults(func=_cmd_stats)
    return parser


def cli_run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except TailorsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        return 1


def main() -> None:
    sys.exit(cli_run())
