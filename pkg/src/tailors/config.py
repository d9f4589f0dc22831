"""Pipeline constants as a frozen dataclass, overridable via TAILORS_CONFIG.

The environment variable, when set, must hold a JSON object whose keys are
field names of :class:`PipelineConfig`. Unknown keys are rejected loudly
rather than ignored.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace

ENV_VAR = "TAILORS_CONFIG"

# Critical-band edges in Hz; band z (1..24) covers [edges[z-1], edges[z]).
# Energy above the last edge is folded into the top band.
BARK_EDGES_HZ: tuple[float, ...] = (
    0.0, 100.0, 200.0, 300.0, 400.0, 510.0, 630.0, 770.0, 920.0, 1080.0,
    1270.0, 1480.0, 1720.0, 2000.0, 2320.0, 2700.0, 3150.0, 3700.0,
    4400.0, 5300.0, 6400.0, 7700.0, 9500.0, 12000.0, 15500.0,
)


@dataclass(frozen=True)
class PipelineConfig:
    """Every tunable the analysis and mapping stages read."""

    window_size: int = 4096
    hop_size: int = 1024
    fps: float = 30.0
    smoothing_alpha: float = 0.2
    # spectral peak picking: floor below the frame's strongest peak, and a cap
    peak_floor_db: float = 60.0
    max_peaks: int = 32
    bark_edges_hz: tuple[float, ...] = BARK_EDGES_HZ
    brightness_cutoff_hz: float = 1500.0
    warmth_low_hz: float = 50.0
    warmth_high_hz: float = 700.0
    depth_cutoff_hz: float = 200.0
    # hardness class boundaries on the normalized scale
    kind_thresholds: tuple[float, float] = (1.0 / 3.0, 2.0 / 3.0)
    # hue endpoints for warmth 0 and 1
    hue_cold_deg: float = 270.0
    hue_warm_deg: float = 30.0

    def __post_init__(self) -> None:
        if self.window_size <= 0 or self.hop_size <= 0:
            raise ValueError("window_size and hop_size must be positive")
        if self.hop_size > self.window_size:
            raise ValueError("hop_size must not exceed window_size")
        if self.fps <= 0:
            raise ValueError("fps must be positive")
        if not 0.0 <= self.smoothing_alpha <= 1.0:
            raise ValueError("smoothing_alpha must lie in [0, 1]")
        if self.peak_floor_db <= 0:
            raise ValueError("peak_floor_db must be positive")
        if self.max_peaks < 2:
            raise ValueError("max_peaks below 2 leaves nothing to pair")
        edges = self.bark_edges_hz
        if len(edges) < 2 or any(b <= a for a, b in zip(edges, edges[1:])):
            raise ValueError("bark_edges_hz must be strictly increasing")
        if not 0.0 <= self.warmth_low_hz < self.warmth_high_hz:
            raise ValueError("warmth band must satisfy 0 <= low < high")
        lo, hi = self.kind_thresholds
        if not 0.0 < lo < hi < 1.0:
            raise ValueError("kind_thresholds must satisfy 0 < lo < hi < 1")


DEFAULT_CONFIG = PipelineConfig()

_FIELD_NAMES = {f.name for f in fields(PipelineConfig)}
_TUPLE_FIELDS = {"bark_edges_hz", "kind_thresholds"}


def load_config(env: dict[str, str] | None = None) -> PipelineConfig:
    """Defaults, overridden by the JSON file TAILORS_CONFIG points at."""
    path = (os.environ if env is None else env).get(ENV_VAR)
    if path is None:
        return DEFAULT_CONFIG
    with open(path, encoding="utf-8") as handle:
        raw = handle.read()
    try:
        overrides = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{ENV_VAR} file {path} is not valid JSON: {exc}") from exc
    if not isinstance(overrides, dict):
        raise ValueError(f"{ENV_VAR} file {path} must hold a JSON object")
    unknown = set(overrides) - _FIELD_NAMES
    if unknown:
        raise ValueError(f"{ENV_VAR} file {path} has unknown keys: {sorted(unknown)}")
    for name in _TUPLE_FIELDS & set(overrides):
        overrides[name] = tuple(overrides[name])
    return replace(DEFAULT_CONFIG, **overrides)
