"""Normalization, smoothing, and the feature-to-visual mapping rules.

The visual vocabulary: the vocal drives a particle-sphere object
(dispersion, metalness, hue) and the background drives a backdrop
(kind, surface roughness, hue, value, saturation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

from .config import DEFAULT_CONFIG, PipelineConfig
from .errors import EmptySeries, OutOfRange
from .features import FEATURE_NAMES, TimbralTimeSeries


class BackgroundKind(Enum):
    CLOUD = "cloud"
    WATER = "water"
    ICE = "ice"

    @property
    def ordinal(self) -> int:
        return ("cloud", "water", "ice").index(self.value)


def _check_unit(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or not 0.0 <= value <= 1.0:
        raise OutOfRange(f"{name} must lie in [0, 1], got {value}")
    return value


@dataclass(frozen=True)
class VocalVisualParams:
    dispersion: float
    metalness: float
    hue_deg: float

    def __post_init__(self) -> None:
        _check_unit("dispersion", self.dispersion)
        _check_unit("metalness", self.metalness)
        if not math.isfinite(self.hue_deg) or not 0.0 <= self.hue_deg < 360.0:
            raise OutOfRange(f"hue_deg must lie in [0, 360), got {self.hue_deg}")


@dataclass(frozen=True)
class BackgroundVisualParams:
    kind: BackgroundKind
    surface_roughness: float
    hue_deg: float
    value: float
    saturation: float

    def __post_init__(self) -> None:
        if not isinstance(self.kind, BackgroundKind):
            raise TypeError("kind must be a BackgroundKind")
        _check_unit("surface_roughness", self.surface_roughness)
        _check_unit("value", self.value)
        _check_unit("saturation", self.saturation)
        if not math.isfinite(self.hue_deg) or not 0.0 <= self.hue_deg < 360.0:
            raise OutOfRange(f"hue_deg must lie in [0, 360), got {self.hue_deg}")


@dataclass(frozen=True)
class VisualFrame:
    t: float
    object: VocalVisualParams
    background: BackgroundVisualParams

    def __post_init__(self) -> None:
        if not math.isfinite(self.t) or self.t < 0.0:
            raise ValueError("t must be finite and non-negative")


def min_max_normalize(values: Sequence[float] | np.ndarray) -> np.ndarray:
    """Scale to [0, 1] over the whole series; a constant series maps to 0.5."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise EmptySeries("cannot normalize an empty series")
    if not np.all(np.isfinite(arr)):
        raise ValueError("series must be finite")
    lo = float(arr.min())
    hi = float(arr.max())
    if hi == lo:
        return np.full(arr.shape, 0.5)
    return (arr - lo) / (hi - lo)


def normalize_with_bounds(values: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """Normalize against fixed corpus-wide bounds, clipping to [0, 1]."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise EmptySeries("cannot normalize an empty series")
    if hi == lo:
        return np.full(arr.shape, 0.5)
    if hi < lo:
        raise ValueError("bounds must satisfy lo <= hi")
    return np.clip((arr - lo) / (hi - lo), 0.0, 1.0)


def ewma_smooth(values: np.ndarray, alpha: float) -> np.ndarray:
    """y[0] = x[0]; y[k] = alpha*x[k] + (1-alpha)*y[k-1]."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise EmptySeries("cannot smooth an empty series")
    out = np.empty_like(arr)
    out[0] = arr[0]
    for k in range(1, arr.size):
        out[k] = alpha * arr[k] + (1.0 - alpha) * out[k - 1]
    return out


def hue_from_warmth(
    warmth: float,
    cold_deg: float = DEFAULT_CONFIG.hue_cold_deg,
    warm_deg: float = DEFAULT_CONFIG.hue_warm_deg,
) -> float:
    """Linear sweep from the cold hue at warmth 0 to the warm hue at warmth 1."""
    w = _check_unit("warmth", warmth)
    return cold_deg + (warm_deg - cold_deg) * w


def classify_kind(
    hardness: float, thresholds: tuple[float, float] = DEFAULT_CONFIG.kind_thresholds
) -> BackgroundKind:
    """Three-way split of normalized hardness: cloud, water, ice."""
    h = _check_unit("hardness", hardness)
    lo, hi = thresholds
    if h < lo:
        return BackgroundKind.CLOUD
    if h < hi:
        return BackgroundKind.WATER
    return BackgroundKind.ICE


def map_vocal(
    roughness: float,
    sharpness: float,
    warmth: float,
    config: PipelineConfig = DEFAULT_CONFIG,
) -> VocalVisualParams:
    """Normalized vocal features -> object parameters.

    Roughness scatters the particle cloud, sharpness hardens the surface
    finish, warmth picks the hue.
    """
    return VocalVisualParams(
        dispersion=_check_unit("roughness", roughness),
        metalness=_check_unit("sharpness", sharpness),
        hue_deg=hue_from_warmth(warmth, config.hue_cold_deg, config.hue_warm_deg),
    )


def map_background(
    roughness: float,
    depth: float,
    brightness: float,
    hardness: float,
    warmth: float,
    config: PipelineConfig = DEFAULT_CONFIG,
) -> BackgroundVisualParams:
    """Normalized background features -> backdrop parameters."""
    return BackgroundVisualParams(
        kind=classify_kind(hardness, config.kind_thresholds),
        surface_roughness=_check_unit("roughness", roughness),
        hue_deg=hue_from_warmth(warmth, config.hue_cold_deg, config.hue_warm_deg),
        value=_check_unit("brightness", brightness),
        saturation=_check_unit("depth", depth),
    )


def channel_bounds(
    series_iter: Iterable[TimbralTimeSeries],
) -> dict[str, tuple[float, float]]:
    """Per-channel (min, max) across a corpus, for corpus-wide normalization."""
    mins: dict[str, float] = {}
    maxs: dict[str, float] = {}
    seen = False
    for series in series_iter:
        if not series.frames:
            raise EmptySeries("corpus contains an empty series")
        seen = True
        for name in FEATURE_NAMES:
            channel = series.channel(name)
            lo = float(channel.min())
            hi = float(channel.max())
            mins[name] = min(mins.get(name, lo), lo)
            maxs[name] = max(maxs.get(name, hi), hi)
    if not seen:
        raise EmptySeries("corpus is empty")
    return {name: (mins[name], maxs[name]) for name in FEATURE_NAMES}


def map_track(
    series: TimbralTimeSeries,
    fps: float = DEFAULT_CONFIG.fps,
    smoothing_alpha: float = DEFAULT_CONFIG.smoothing_alpha,
    config: PipelineConfig = DEFAULT_CONFIG,
    bounds: Mapping[str, tuple[float, float]] | None = None,
) -> list[VisualFrame]:
    """Normalize, smooth, and resample a feature series onto a frame clock.

    Emits frames at t = k / fps for k = 0 .. floor(duration * fps) - 1,
    each taking its values from the nearest analysis hop. When ``bounds``
    is given, channels normalize against those fixed ranges instead of
    the track's own extremes.
    """
    if not series.frames:
        raise EmptySeries("cannot map an empty series")
    if fps <= 0:
        raise ValueError("fps must be positive")

    smoothed: dict[str, np.ndarray] = {}
    for name in FEATURE_NAMES:
        channel = series.channel(name)
        if bounds is None:
            normalized = min_max_normalize(channel)
        else:
            lo, hi = bounds[name]
            normalized = normalize_with_bounds(channel, lo, hi)
        smoothed[name] = ewma_smooth(normalized, smoothing_alpha)

    n_hops = len(series.frames)
    # tiny epsilon so an exact integer product is not floored away
    n_out = int(math.floor(series.duration_s * fps + 1e-9))
    frames: list[VisualFrame] = []
    for k in range(n_out):
        t = k / fps
        hop = min(n_hops - 1, int(math.floor(t / series.hop_seconds + 0.5)))
        frames.append(
            VisualFrame(
                t=t,
                object=map_vocal(
                    smoothed["vocal_roughness"][hop],
                    smoothed["vocal_sharpness"][hop],
                    smoothed["vocal_warmth"][hop],
                    config,
                ),
                background=map_background(
                    smoothed["bg_roughness"][hop],
                    smoothed["bg_depth"][hop],
                    smoothed["bg_brightness"][hop],
                    smoothed["bg_hardness"][hop],
                    smoothed["bg_warmth"][hop],
                    config,
                ),
            )
        )
    return frames
