"""Per-frame timbral descriptors for a vocal stem and a background stem.

Eight channels per frame: the vocal contributes roughness, sharpness and
warmth; the background contributes roughness, depth, brightness, hardness
and warmth. All band-energy features are ratios in [0, 1]; roughness and
sharpness carry their own natural scales and are normalized later.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .audio_io import (
    Spectrum,
    StemPair,
    batch_power_spectra,
    ensure_analyzable,
    frame_signal,
)
from .config import DEFAULT_CONFIG, PipelineConfig


@dataclass(frozen=True)
class SpectralPeak:
    freq_hz: float
    amplitude: float


@dataclass(frozen=True)
class TimbralFrame:
    vocal_roughness: float
    vocal_sharpness: float
    vocal_warmth: float
    bg_roughness: float
    bg_depth: float
    bg_brightness: float
    bg_hardness: float
    bg_warmth: float

    def __post_init__(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"{f.name} must be finite and non-negative")


FEATURE_NAMES: tuple[str, ...] = tuple(f.name for f in fields(TimbralFrame))


@dataclass(frozen=True)
class TimbralTimeSeries:
    """Frame-rate feature tracks plus the timing needed to resample them.

    ``duration_s`` is the true audio duration. It exceeds
    ``len(frames) * hop_seconds`` whenever a trailing remainder shorter
    than one window was dropped by the framer.
    """

    frames: tuple[TimbralFrame, ...]
    hop_seconds: float
    duration_s: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "frames", tuple(self.frames))
        if self.hop_seconds <= 0:
            raise ValueError("hop_seconds must be positive")
        if self.duration_s is None:
            object.__setattr__(self, "duration_s", len(self.frames) * self.hop_seconds)

    def channel(self, name: str) -> np.ndarray:
        if name not in FEATURE_NAMES:
            raise KeyError(name)
        return np.array([getattr(f, name) for f in self.frames], dtype=np.float64)


def spectral_peaks(
    spectrum: Spectrum,
    floor_db: float = DEFAULT_CONFIG.peak_floor_db,
    max_peaks: int = DEFAULT_CONFIG.max_peaks,
) -> list[SpectralPeak]:
    """Strict local maxima of the amplitude spectrum, loudest first.

    Peaks more than ``floor_db`` below the frame's global maximum amplitude
    are dropped, then the list is capped at ``max_peaks``. Both rules compare
    amplitudes relative to the frame itself, so the result is invariant
    under overall gain.
    """
    amp = np.sqrt(spectrum.power)
    if amp.size < 3:
        return []
    interior = amp[1:-1]
    is_peak = (interior > amp[:-2]) & (interior > amp[2:])
    idx = np.nonzero(is_peak)[0] + 1
    if idx.size == 0:
        return []
    top = float(np.max(amp))  # floor is relative to the frame's global maximum
    if top <= 0.0:
        return []
    keep = amp[idx] >= top * 10.0 ** (-floor_db / 20.0)
    idx = idx[keep]
    order = np.argsort(-amp[idx], kind="stable")[:max_peaks]
    idx = idx[order]
    return [SpectralPeak(freq_hz=float(k * spectrum.bin_hz), amplitude=float(amp[k])) for k in idx]


def roughness(peaks: list[SpectralPeak]) -> float:
    """Summed pairwise partial interaction.

    Each pair contributes X^0.1 * 0.5 * Y^3.11 * Z with
    X = a1*a2, Y = 2*min(a1,a2)/(a1+a2),
    Z = exp(-3.5*s*df) - exp(-5.75*s*df), s = 0.24/(0.0207*fmin + 18.96).
    """
    if len(peaks) < 2:
        return 0.0
    freq = np.array([p.freq_hz for p in peaks])
    amp = np.array([p.amplitude for p in peaks])
    i, j = np.triu_indices(len(peaks), k=1)
    f_lo = np.minimum(freq[i], freq[j])
    df = np.abs(freq[i] - freq[j])
    a_lo = np.minimum(amp[i], amp[j])
    a_sum = amp[i] + amp[j]
    x = amp[i] * amp[j]
    y = np.where(a_sum > 0, 2.0 * a_lo / np.where(a_sum > 0, a_sum, 1.0), 0.0)
    s = 0.24 / (0.0207 * f_lo + 18.96)
    z = np.exp(-3.5 * s * df) - np.exp(-5.75 * s * df)
    return float(np.sum(x**0.1 * 0.5 * y**3.11 * z))


def _band_energy_matrix(n_bins: int, bin_hz: float, edges: tuple[float, ...]) -> np.ndarray:
    """(bins, bands) membership matrix; energy above the last edge joins the top band."""
    freqs = np.arange(n_bins) * bin_hz
    band = np.searchsorted(np.asarray(edges), freqs, side="right")  # 0 below first edge
    n_bands = len(edges) - 1
    band = np.clip(band, 1, n_bands)
    return (band[:, np.newaxis] == np.arange(1, n_bands + 1)).astype(np.float64)


def _sharpness_batch(power: np.ndarray, bin_hz: float, edges: tuple[float, ...]) -> np.ndarray:
    membership = _band_energy_matrix(power.shape[-1], bin_hz, edges)
    band_energy = power @ membership
    specific = band_energy**0.23
    z = np.arange(1, len(edges), dtype=np.float64)
    weight = np.where(z <= 15.8, 1.0, 0.85 * np.exp(0.171 * (z - 15.8)))
    total = specific.sum(axis=-1)
    weighted = (specific * weight * z).sum(axis=-1)
    return np.where(total > 0, 0.11 * weighted / np.where(total > 0, total, 1.0), 0.0)


def sharpness(spectrum: Spectrum, edges: tuple[float, ...] = DEFAULT_CONFIG.bark_edges_hz) -> float:
    """0.11 * sum(N'_z * g(z) * z) / sum(N'_z) over 24 critical bands.

    N'_z is band energy raised to 0.23; g(z) is 1 up to band 15.8 and
    0.85 * exp(0.171 * (z - 15.8)) above. Silence maps to 0.
    """
    return float(_sharpness_batch(spectrum.power[np.newaxis, :], spectrum.bin_hz, edges)[0])


def _ratio_batch(power: np.ndarray, mask: np.ndarray) -> np.ndarray:
    total = power.sum(axis=-1)
    selected = (power * mask).sum(axis=-1)
    return np.where(total > 0, selected / np.where(total > 0, total, 1.0), 0.0)


def brightness(
    spectrum: Spectrum, cutoff_hz: float = DEFAULT_CONFIG.brightness_cutoff_hz
) -> float:
    """Fraction of spectral energy at or above the cutoff."""
    return float(_ratio_batch(spectrum.power[np.newaxis, :], spectrum.freqs_hz >= cutoff_hz)[0])


def warmth(
    spectrum: Spectrum,
    low_hz: float = DEFAULT_CONFIG.warmth_low_hz,
    high_hz: float = DEFAULT_CONFIG.warmth_high_hz,
) -> float:
    """Fraction of spectral energy inside [low_hz, high_hz]."""
    freqs = spectrum.freqs_hz
    mask = (freqs >= low_hz) & (freqs <= high_hz)
    return float(_ratio_batch(spectrum.power[np.newaxis, :], mask)[0])


def depth(spectrum: Spectrum, cutoff_hz: float = DEFAULT_CONFIG.depth_cutoff_hz) -> float:
    """Fraction of spectral energy strictly below the cutoff."""
    return float(_ratio_batch(spectrum.power[np.newaxis, :], spectrum.freqs_hz < cutoff_hz)[0])


def _centroid_batch(power: np.ndarray, bin_hz: float) -> np.ndarray:
    amp = np.sqrt(power)
    freqs = np.arange(power.shape[-1]) * bin_hz
    total = amp.sum(axis=-1)
    weighted = (amp * freqs).sum(axis=-1)
    return np.where(total > 0, weighted / np.where(total > 0, total, 1.0), 0.0)


def spectral_centroid(spectrum: Spectrum) -> float:
    """Amplitude-weighted mean frequency; 0 for silence."""
    return float(_centroid_batch(spectrum.power[np.newaxis, :], spectrum.bin_hz)[0])


def _attack_term(rms_track: np.ndarray) -> float:
    peak = float(np.max(rms_track)) if rms_track.size else 0.0
    if peak <= 0.0 or rms_track.size < 2:
        return 0.0
    max_rise = float(np.max(np.diff(rms_track)))
    return max(0.0, max_rise) / peak


def hardness(rms_track: np.ndarray, spectrum: Spectrum) -> float:
    """Mean of an attack term and a brightness-of-centroid term, both in [0, 1].

    The attack term is the largest positive hop-to-hop RMS rise divided by
    the track's peak RMS; the centroid term is this frame's spectral
    centroid divided by the Nyquist frequency.
    """
    rms_track = np.asarray(rms_track, dtype=np.float64)
    centroid_term = spectral_centroid(spectrum) / (spectrum.sample_rate / 2.0)
    return 0.5 * _attack_term(rms_track) + 0.5 * centroid_term


def extract_track_features(
    stems: StemPair, config: PipelineConfig = DEFAULT_CONFIG
) -> TimbralTimeSeries:
    """Run the full per-frame analysis over a stem pair."""
    ensure_analyzable(stems.vocal, config.window_size)
    sr = stems.sample_rate

    vocal_frames = frame_signal(stems.vocal, config.window_size, config.hop_size)
    bg_frames = frame_signal(stems.background, config.window_size, config.hop_size)
    vocal_power = batch_power_spectra(vocal_frames)
    bg_power = batch_power_spectra(bg_frames)
    bin_hz = sr / config.window_size
    freqs = np.arange(vocal_power.shape[-1]) * bin_hz

    vocal_sharp = _sharpness_batch(vocal_power, bin_hz, config.bark_edges_hz)
    warm_mask = (freqs >= config.warmth_low_hz) & (freqs <= config.warmth_high_hz)
    vocal_warm = _ratio_batch(vocal_power, warm_mask)
    bg_warm = _ratio_batch(bg_power, warm_mask)
    bg_deep = _ratio_batch(bg_power, freqs < config.depth_cutoff_hz)
    bg_bright = _ratio_batch(bg_power, freqs >= config.brightness_cutoff_hz)

    bg_rms = np.sqrt(np.mean(bg_frames**2, axis=-1))
    attack = _attack_term(bg_rms)
    centroid_terms = _centroid_batch(bg_power, bin_hz) / (sr / 2.0)
    bg_hard = 0.5 * attack + 0.5 * centroid_terms

    def frame_roughness(power_row: np.ndarray) -> float:
        spec = Spectrum(power=power_row, bin_hz=bin_hz, window_size=config.window_size)
        return roughness(spectral_peaks(spec, config.peak_floor_db, config.max_peaks))

    frames = tuple(
        TimbralFrame(
            vocal_roughness=frame_roughness(vocal_power[k]),
            vocal_sharpness=float(vocal_sharp[k]),
            vocal_warmth=float(vocal_warm[k]),
            bg_roughness=frame_roughness(bg_power[k]),
            bg_depth=float(bg_deep[k]),
            bg_brightness=float(bg_bright[k]),
            bg_hardness=float(bg_hard[k]),
            bg_warmth=float(bg_warm[k]),
        )
        for k in range(vocal_power.shape[0])
    )
    return TimbralTimeSeries(
        frames=frames,
        hop_seconds=config.hop_size / sr,
        duration_s=stems.duration_s,
    )
