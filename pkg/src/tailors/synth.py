"""Deterministic synthetic fixtures: stem audio and survey response tables.

Everything here is seeded. The stems cycle through contrasting segments
(dark rumble, bright shimmer, noisy attack) so every mapped visual
parameter actually moves; the survey generator plants participant-level
structure so the regression and comparison tables are non-trivial.
"""

from __future__ import annotations

import wave
from pathlib import Path

import numpy as np

VOCAL_SUFFIX = ".vocal.wav"
BACKGROUND_SUFFIX = ".background.wav"


def sine(freq_hz: float, duration_s: float, sample_rate: int, amp: float = 0.5) -> np.ndarray:
    t = np.arange(int(round(duration_s * sample_rate))) / sample_rate
    return amp * np.sin(2.0 * np.pi * freq_hz * t)


def write_wav(
    path: str | Path,
    samples: np.ndarray,
    sample_rate: int,
    bits: int = 16,
    channels: int = 1,
) -> Path:
    """Write float samples in [-1, 1] as PCM via the stdlib wave module."""
    path = Path(path)
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim == 1 and channels == 2:
        samples = np.stack([samples, samples], axis=-1)
    if bits == 16:
        ints = np.clip(np.round(samples * 32767.0), -32768, 32767).astype("<i2")
        payload = ints.tobytes()
    elif bits == 24:
        scaled = np.clip(np.round(samples * 8388607.0), -8388608, 8388607).astype(np.int64)
        flat = scaled.reshape(-1)
        raw = np.empty((flat.size, 3), dtype=np.uint8)
        raw[:, 0] = flat & 0xFF
        raw[:, 1] = (flat >> 8) & 0xFF
        raw[:, 2] = (flat >> 16) & 0xFF
        payload = raw.tobytes()
    else:
        raise ValueError("bits must be 16 or 24")
    with wave.open(str(path), "wb") as handle:
        handle.setnchannels(channels)
        handle.setsampwidth(bits // 8)
        handle.setframerate(sample_rate)
        handle.writeframes(payload)
    return path


def _segment_plan(n_segments: int, rng: np.random.Generator) -> list[dict]:
    """One character card per segment; cycles dark -> mid -> bright."""
    notes = [220.0, 261.63, 329.63, 392.0, 440.0, 523.25]
    plan = []
    for i in range(n_segments):
        mode = i % 3  # 0 dark, 1 mid, 2 bright
        plan.append(
            {
                "f0": notes[int(rng.integers(len(notes)))],
                "vibrato_hz": float(rng.uniform(4.0, 6.5)),
                "n_harmonics": (2, 5, 9)[mode],
                "harmonic_decay": (2.2, 1.4, 0.9)[mode],
                "rumble_hz": float(rng.uniform(55.0, 110.0)),
                "rumble_amp": (0.55, 0.3, 0.1)[mode],
                "noise_amp": (0.05, 0.18, 0.4)[mode],
                "noise_color": mode,  # 0 brown, 1 white, 2 differenced
                "burst_amp": (0.1, 0.35, 0.7)[mode],
            }
        )
    return plan


def synth_stem_pair(
    duration_s: float = 30.0,
    sample_rate: int = 44100,
    seed: int = 7,
    n_segments: int = 6,
) -> tuple[np.ndarray, np.ndarray]:
    """Return (vocal, background) float arrays of equal length."""
    rng = np.random.default_rng(seed)
    n = int(round(duration_s * sample_rate))
    seg_len = n // n_segments
    vocal = np.zeros(n)
    background = np.zeros(n)

    for i, card in enumerate(_segment_plan(n_segments, rng)):
        start = i * seg_len
        end = n if i == n_segments - 1 else (i + 1) * seg_len
        t = np.arange(end - start) / sample_rate

        vib = 1.0 + 0.004 * np.sin(2.0 * np.pi * card["vibrato_hz"] * t)
        voice = np.zeros(end - start)
        for h in range(1, card["n_harmonics"] + 1):
            voice += (h ** -card["harmonic_decay"]) * np.sin(
                2.0 * np.pi * card["f0"] * h * vib * t + rng.uniform(0, 2 * np.pi)
            )
        envelope = np.minimum(1.0, t / 0.05) * (0.75 + 0.25 * np.sin(2.0 * np.pi * 0.5 * t))
        vocal[start:end] = 0.4 * voice / max(1.0, np.max(np.abs(voice))) * envelope

        rumble = card["rumble_amp"] * np.sin(2.0 * np.pi * card["rumble_hz"] * t)
        white = rng.standard_normal(end - start)
        if card["noise_color"] == 0:
            noise = np.cumsum(white)
        elif card["noise_color"] == 1:
            noise = white
        else:
            noise = np.diff(white, prepend=0.0)
        noise = noise / max(1e-12, np.max(np.abs(noise)))
        burst = card["burst_amp"] * np.exp(-t / 0.08) * rng.standard_normal(end - start)
        burst = burst / max(1.0, np.max(np.abs(burst)))
        background[start:end] = rumble + card["noise_amp"] * noise + 0.3 * burst

    for track in (vocal, background):
        peak = np.max(np.abs(track))
        if peak > 0.9:
            track *= 0.9 / peak
    return vocal, background


def write_demo_stems(
    directory: str | Path,
    track_id: str = "demo",
    duration_s: float = 30.0,
    sample_rate: int = 44100,
    seed: int = 7,
    bits: int = 16,
) -> tuple[Path, Path]:
    """Write <track>.vocal.wav and <track>.background.wav; returns the paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    vocal, background = synth_stem_pair(duration_s, sample_rate, seed)
    vocal_path = write_wav(directory / f"{track_id}{VOCAL_SUFFIX}", vocal, sample_rate, bits)
    background_path = write_wav(
        directory / f"{track_id}{BACKGROUND_SUFFIX}", background, sample_rate, bits
    )
    return vocal_path, background_path


# --- survey fixtures ------------------------------------------------------

SURVEY_CSV_HEADER = ("participant_id", "music_id", "condition", "survey", "feature", "score")


def synth_survey_rows(
    seed: int = 23,
    n_participants: int = 27,
    n_musics: int = 20,
    conditions: tuple[str, ...] = ("A", "B", "C"),
) -> list[tuple[str, str, str, str, str, str]]:
    """Full factorial survey table with planted participant structure.

    Scores follow a three-factor participant model with feature loadings
    drawn once per feature, plus a per-(participant, feature) inclination
    that keeps the participant-mean design matrices well conditioned.
    """
    from .stats.survey import SURVEY_FEATURES

    rng = np.random.default_rng(seed)
    participants = [f"P{i + 1:02d}" for i in range(n_participants)]
    traits = rng.normal(0.0, 1.0, size=(n_participants, 3))

    loadings: dict[tuple[str, str], np.ndarray] = {}
    base: dict[tuple[str, str], float] = {}
    condition_shift: dict[tuple[str, str, str], float] = {}
    personal: dict[tuple[str, str], np.ndarray] = {}
    for survey, features in SURVEY_FEATURES.items():
        for feature in features:
            loadings[(survey, feature)] = rng.normal(0.0, 0.35, size=3)
            base[(survey, feature)] = float(rng.uniform(3.0, 5.0))
            personal[(survey, feature)] = rng.normal(0.0, 0.7, size=n_participants)
            for condition in conditions:
                condition_shift[(survey, feature, condition)] = float(rng.normal(0.0, 0.4))

    rows: list[tuple[str, str, str, str, str, str]] = []
    for p_idx, participant in enumerate(participants):
        for music in range(1, n_musics + 1):
            music_wobble = rng.normal(0.0, 0.5)
            for condition in conditions:
                for survey, features in SURVEY_FEATURES.items():
                    for feature in features:
                        mean = (
                            base[(survey, feature)]
                            + condition_shift[(survey, feature, condition)]
                            + float(loadings[(survey, feature)] @ traits[p_idx])
                            + float(personal[(survey, feature)][p_idx])
                            + music_wobble
                            + rng.normal(0.0, 0.7)
                        )
                        score = int(np.clip(round(mean), 1, 7))
                        rows.append(
                            (participant, str(music), condition, survey, feature, str(score))
                        )
    return rows


def write_survey_csv(path: str | Path, rows: list[tuple[str, ...]]) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(",".join(SURVEY_CSV_HEADER) + "\n")
        for row in rows:
            handle.write(",".join(row) + "\n")
    return path


def write_demo_survey(path: str | Path, seed: int = 23) -> Path:
    return write_survey_csv(path, synth_survey_rows(seed=seed))
