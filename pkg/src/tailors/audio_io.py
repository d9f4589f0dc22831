"""WAV stem decoding and short-time spectral analysis.

The decoder is a deliberate from-scratch RIFF walk rather than a wrapper
around ``wave``: the rest of the pipeline needs precise, typed failures
(malformed container vs. unsupported encoding vs. truncated payload), and
the stdlib module collapses all of those into one exception.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    AudioTooShort,
    MalformedHeader,
    SampleRateMismatch,
    TruncatedData,
    UnsupportedFormat,
    WindowTooLarge,
)

SUPPORTED_SAMPLE_RATES = (44100, 48000)
SUPPORTED_BIT_DEPTHS = (16, 24)
SUPPORTED_CHANNEL_COUNTS = (1, 2)


@dataclass(frozen=True)
class AudioBuffer:
    """Mono float64 samples in [-1, 1] at a known sample rate."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.float64)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        if int(self.sample_rate) <= 0:
            raise ValueError("sample_rate must be positive")
        object.__setattr__(self, "sample_rate", int(self.sample_rate))
        if samples.size and not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        if samples.size and float(np.max(np.abs(samples))) > 1.0:
            raise ValueError("samples must lie in [-1, 1]")

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate


@dataclass(frozen=True)
class StemPair:
    """A vocal stem and a background stem, length- and rate-aligned."""

    vocal: AudioBuffer
    background: AudioBuffer

    def __post_init__(self) -> None:
        if self.vocal.sample_rate != self.background.sample_rate:
            raise SampleRateMismatch(
                f"vocal is {self.vocal.sample_rate} Hz but background is "
                f"{self.background.sample_rate} Hz"
            )
        if self.vocal.samples.size != self.background.samples.size:
            raise ValueError("stems must be equal length; use pair_stems to pad")

    @property
    def sample_rate(self) -> int:
        return self.vocal.sample_rate

    @property
    def duration_s(self) -> float:
        return self.vocal.duration_s


@dataclass(frozen=True)
class Spectrum:
    """One-sided power spectrum of a single analysis frame."""

    power: np.ndarray
    bin_hz: float
    window_size: int

    def __post_init__(self) -> None:
        power = np.asarray(self.power, dtype=np.float64)
        object.__setattr__(self, "power", power)
        if power.ndim != 1:
            raise ValueError("power must be one-dimensional")
        if power.size != self.window_size // 2 + 1:
            raise ValueError("power length must be window_size // 2 + 1")
        if self.bin_hz <= 0:
            raise ValueError("bin_hz must be positive")
        if power.size and (not np.all(np.isfinite(power)) or np.any(power < 0)):
            raise ValueError("power must be finite and non-negative")

    @property
    def freqs_hz(self) -> np.ndarray:
        return np.arange(self.power.size) * self.bin_hz

    @property
    def sample_rate(self) -> float:
        return self.bin_hz * self.window_size


def _read_exact_header(data: bytes, path: Path) -> None:
    if len(data) < 12:
        raise MalformedHeader(f"{path}: too small to hold a RIFF header")
    if data[0:4] != b"RIFF":
        raise MalformedHeader(f"{path}: missing RIFF magic, got {data[0:4]!r}")
    if data[8:12] != b"WAVE":
        raise MalformedHeader(f"{path}: RIFF form is {data[8:12]!r}, not WAVE")


def load_wav(path: str | Path) -> AudioBuffer:
    """Decode a PCM WAV file into a mono AudioBuffer.

    Accepts 16- or 24-bit PCM, mono or stereo, at 44100 or 48000 Hz.
    Stereo is averaged down to mono. Raises MalformedHeader,
    UnsupportedFormat, or TruncatedData as appropriate.
    """
    path = Path(path)
    data = path.read_bytes()
    _read_exact_header(data, path)

    fmt = None
    payload = None
    declared_size = None
    pos = 12
    while pos + 8 <= len(data):
        chunk_id = data[pos : pos + 4]
        (size,) = struct.unpack_from("<I", data, pos + 4)
        body = data[pos + 8 : pos + 8 + size]
        if chunk_id == b"fmt " and fmt is None:
            if len(body) < 16:
                raise MalformedHeader(f"{path}: fmt chunk shorter than 16 bytes")
            fmt = struct.unpack_from("<HHIIHH", body, 0)
        elif chunk_id == b"data" and payload is None:
            declared_size = size
            payload = body
        pos += 8 + size + (size & 1)  # chunks are word aligned

    if fmt is None:
        raise MalformedHeader(f"{path}: no fmt chunk")
    if payload is None:
        raise MalformedHeader(f"{path}: no data chunk")

    audio_format, channels, rate, _byte_rate, block_align, bits = fmt
    if audio_format != 1:
        raise UnsupportedFormat(f"{path}: format tag {audio_format}, only PCM (1)")
    if bits not in SUPPORTED_BIT_DEPTHS:
        raise UnsupportedFormat(f"{path}: {bits}-bit, supported: {SUPPORTED_BIT_DEPTHS}")
    if channels not in SUPPORTED_CHANNEL_COUNTS:
        raise UnsupportedFormat(f"{path}: {channels} channels, supported: 1 or 2")
    if rate not in SUPPORTED_SAMPLE_RATES:
        raise UnsupportedFormat(f"{path}: {rate} Hz, supported: {SUPPORTED_SAMPLE_RATES}")
    expected_align = channels * bits // 8
    if block_align != expected_align:
        raise MalformedHeader(
            f"{path}: block align {block_align} != channels*bits/8 = {expected_align}"
        )

    if len(payload) < declared_size:
        raise TruncatedData(
            f"{path}: data chunk declares {declared_size} bytes, file holds {len(payload)}"
        )
    if declared_size % block_align != 0:
        raise TruncatedData(f"{path}: data chunk ends mid sample frame")

    if bits == 16:
        ints = np.frombuffer(payload, dtype="<i2").astype(np.float64)
    else:
        raw = np.frombuffer(payload, dtype=np.uint8).reshape(-1, 3)
        ints = (
            raw[:, 0].astype(np.int32)
            | (raw[:, 1].astype(np.int32) << 8)
            | (raw[:, 2].astype(np.int32) << 16)
        )
        ints = np.where(ints >= 1 << 23, ints - (1 << 24), ints).astype(np.float64)

    samples = ints / float(1 << (bits - 1))
    if channels == 2:
        samples = samples.reshape(-1, 2).mean(axis=1)
    return AudioBuffer(samples=samples, sample_rate=rate)


def pair_stems(vocal: AudioBuffer, background: AudioBuffer) -> StemPair:
    """Zero-pad the shorter stem so both cover the same span."""
    if vocal.sample_rate != background.sample_rate:
        raise SampleRateMismatch(
            f"vocal is {vocal.sample_rate} Hz but background is {background.sample_rate} Hz"
        )
    n = max(vocal.samples.size, background.samples.size)

    def pad(buf: AudioBuffer) -> AudioBuffer:
        if buf.samples.size == n:
            return buf
        padded = np.zeros(n, dtype=np.float64)
        padded[: buf.samples.size] = buf.samples
        return AudioBuffer(samples=padded, sample_rate=buf.sample_rate)

    return StemPair(vocal=pad(vocal), background=pad(background))


def load_stem_pair(vocal_path: str | Path, background_path: str | Path) -> StemPair:
    return pair_stems(load_wav(vocal_path), load_wav(background_path))


def discover_stem_pairs(directory: str | Path) -> dict[str, tuple[Path, Path]]:
    """Map track id -> (vocal path, background path) for matched stem files."""
    directory = Path(directory)
    pairs: dict[str, tuple[Path, Path]] = {}
    for vocal in sorted(directory.glob("*.vocal.wav")):
        track_id = vocal.name[: -len(".vocal.wav")]
        background = directory / f"{track_id}.background.wav"
        if background.exists():
            pairs[track_id] = (vocal, background)
    return pairs


def hann_window(window_size: int) -> np.ndarray:
    # periodic form: 0.5 * (1 - cos(2*pi*n/N)), n = 0..N-1
    n = np.arange(window_size)
    return 0.5 * (1.0 - np.cos(2.0 * np.pi * n / window_size))


def frame_signal(buffer: AudioBuffer, window_size: int, hop_size: int) -> np.ndarray:
    """Slice into overlapping frames; returns shape (frames, window_size).

    Frame count is floor((N - window) / hop) + 1; a trailing remainder
    shorter than one window is dropped.
    """
    if window_size <= 0 or hop_size <= 0:
        raise ValueError("window_size and hop_size must be positive")
    if hop_size > window_size:
        raise ValueError("hop_size must not exceed window_size")
    n = buffer.samples.size
    if window_size > n:
        raise WindowTooLarge(f"window {window_size} exceeds signal length {n}")
    view = np.lib.stride_tricks.sliding_window_view(buffer.samples, window_size)
    return view[::hop_size]


def power_spectrum(frame: np.ndarray, sample_rate: int) -> Spectrum:
    """Hann-windowed one-sided power spectrum of a single frame."""
    frame = np.asarray(frame, dtype=np.float64)
    if frame.ndim != 1 or frame.size == 0:
        raise ValueError("frame must be a non-empty 1-D array")
    power = batch_power_spectra(frame[np.newaxis, :])[0]
    return Spectrum(power=power, bin_hz=sample_rate / frame.size, window_size=frame.size)


def batch_power_spectra(frames: np.ndarray) -> np.ndarray:
    """|rfft(frame * hann)|^2 over axis -1 for a (frames, window) array."""
    frames = np.asarray(frames, dtype=np.float64)
    window = hann_window(frames.shape[-1])
    spectra = np.fft.rfft(frames * window, axis=-1)
    return np.abs(spectra) ** 2


def ensure_analyzable(buffer: AudioBuffer, window_size: int) -> None:
    if buffer.samples.size < window_size:
        raise AudioTooShort(
            f"signal has {buffer.samples.size} samples, below one window of {window_size}"
        )
