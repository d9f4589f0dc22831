"""Timbral descriptor tests: hand oracles, gain laws, and orderings."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tailors.audio_io import AudioBuffer, Spectrum, StemPair, power_spectrum
from tailors.config import DEFAULT_CONFIG
from tailors.errors import AudioTooShort
from tailors.features import (
    FEATURE_NAMES,
    SpectralPeak,
    TimbralFrame,
    TimbralTimeSeries,
    brightness,
    depth,
    extract_track_features,
    hardness,
    roughness,
    sharpness,
    spectral_centroid,
    spectral_peaks,
    warmth,
)

SR = 44100
N = 4096
BIN_HZ = SR / N


def tone_frame(bins_and_amps: list[tuple[int, float]], n: int = N, sr: int = SR) -> np.ndarray:
    """Sum of sines at exact bin centers; clean 3-bin spectra under the window."""
    t = np.arange(n) / sr
    frame = np.zeros(n)
    for k, amp in bins_and_amps:
        frame += amp * np.sin(2 * np.pi * (k * sr / n) * t)
    return frame


def spectrum_of(frame: np.ndarray, sr: int = SR) -> Spectrum:
    return power_spectrum(frame, sr)


def flat_spectrum(power: np.ndarray, sr: int = SR) -> Spectrum:
    window = (len(power) - 1) * 2
    return Spectrum(power=power, bin_hz=sr / window, window_size=window)


# --- peaks -----------------------------------------------------------------


def test_zero_spectrum_has_no_peaks():
    assert spectral_peaks(flat_spectrum(np.zeros(2049))) == []


def test_single_tone_one_peak_at_tone():
    spec = spectrum_of(tone_frame([(93, 0.5)]))
    peaks = spectral_peaks(spec)
    near = [p for p in peaks if abs(p.freq_hz - 93 * BIN_HZ) <= BIN_HZ]
    assert len(near) == 1


def test_two_tones_both_retained():
    k440 = round(440 / BIN_HZ)
    k880 = round(880 / BIN_HZ)
    spec = spectrum_of(tone_frame([(k440, 0.4), (k880, 0.4)]))
    peaks = spectral_peaks(spec)
    for k in (k440, k880):
        assert any(abs(p.freq_hz - k * BIN_HZ) <= BIN_HZ for p in peaks)


def test_floor_drops_quiet_peaks():
    power = np.zeros(513)
    power[100] = 1.0
    power[300] = (10 ** (-70 / 20)) ** 2  # 70 dB below in amplitude
    peaks = spectral_peaks(flat_spectrum(power))
    assert len(peaks) == 1
    assert peaks[0].freq_hz == pytest.approx(100 * flat_spectrum(power).bin_hz)


def test_floor_is_relative_to_global_max_not_peak_set():
    # huge DC (not a local max candidate) should still set the floor
    power = np.zeros(513)
    power[0] = 1.0
    power[100] = (10 ** (-70 / 20)) ** 2
    assert spectral_peaks(flat_spectrum(power)) == []


def test_peak_cap_and_ordering():
    rng = np.random.default_rng(0)
    power = np.zeros(2049)
    idx = np.arange(2, 2040, 14)  # plenty of isolated spikes
    power[idx] = rng.uniform(0.5, 1.0, size=idx.size)
    peaks = spectral_peaks(flat_spectrum(power))
    assert len(peaks) == 32
    amps = [p.amplitude for p in peaks]
    assert amps == sorted(amps, reverse=True)


@given(seed=st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_every_peak_is_strict_local_max(seed):
    rng = np.random.default_rng(seed)
    power = rng.uniform(0, 1, size=257) ** 4
    spec = flat_spectrum(power)
    amp = np.sqrt(power)
    for peak in spectral_peaks(spec):
        k = round(peak.freq_hz / spec.bin_hz)
        assert 0 < k < len(power) - 1
        assert amp[k] > amp[k - 1] and amp[k] > amp[k + 1]
        assert 0.0 < peak.freq_hz < spec.sample_rate / 2


@given(seed=st.integers(0, 10_000), gain_db=st.floats(-20, 20))
@settings(max_examples=40, deadline=None)
def test_peak_set_gain_invariant(seed, gain_db):
    rng = np.random.default_rng(seed)
    power = rng.uniform(0, 1, size=257) ** 4
    gain = 10 ** (gain_db / 20)
    base = spectral_peaks(flat_spectrum(power))
    scaled = spectral_peaks(flat_spectrum(power * gain**2))
    assert [p.freq_hz for p in base] == [p.freq_hz for p in scaled]


# --- roughness ---------------------------------------------------------------


def test_roughness_needs_two_peaks():
    assert roughness([]) == 0.0
    assert roughness([SpectralPeak(440.0, 1.0)]) == 0.0


def test_roughness_sweep_optimum_near_27hz():
    deltas = np.arange(1.0, 120.0, 0.1)
    scores = [
        roughness([SpectralPeak(500.0, 1.0), SpectralPeak(500.0 + d, 1.0)]) for d in deltas
    ]
    best = deltas[int(np.argmax(scores))]
    assert 24.0 <= best <= 30.0


def test_roughness_amplitude_scaling_law():
    peaks = [SpectralPeak(500.0, 0.8), SpectralPeak(530.0, 0.5), SpectralPeak(700.0, 0.3)]
    base = roughness(peaks)
    for c in (0.1, 2.0, 10.0):
        scaled = roughness([SpectralPeak(p.freq_hz, p.amplitude * c) for p in peaks])
        assert scaled == pytest.approx(base * c**0.2, rel=1e-9)


def test_roughness_symmetric_and_additive_over_pairs():
    a = SpectralPeak(400.0, 0.9)
    b = SpectralPeak(440.0, 0.7)
    c = SpectralPeak(1000.0, 0.5)
    total = roughness([a, b, c])
    pair_sum = roughness([a, b]) + roughness([a, c]) + roughness([b, c])
    assert total == pytest.approx(pair_sum, rel=1e-12)
    assert roughness([c, a, b]) == pytest.approx(total, rel=1e-12)


# --- sharpness ---------------------------------------------------------------


def band_bin(edges_idx: int) -> int:
    """Some bin strictly inside Bark band edges_idx (1-based)."""
    lo = DEFAULT_CONFIG.bark_edges_hz[edges_idx - 1]
    hi = DEFAULT_CONFIG.bark_edges_hz[edges_idx]
    return int(((lo + hi) / 2) // BIN_HZ)


def test_sharpness_single_band_hand_value():
    power = np.zeros(N // 2 + 1)
    power[band_bin(10)] = 3.0
    power[band_bin(10) + 1] = 1.0  # same band, different bin
    spec = Spectrum(power=power, bin_hz=BIN_HZ, window_size=N)
    assert sharpness(spec) == pytest.approx(0.11 * 10, rel=1e-12)


def test_sharpness_high_band_exceeds_low_band():
    low = np.zeros(N // 2 + 1)
    high = np.zeros(N // 2 + 1)
    low[band_bin(5)] = 2.0
    high[band_bin(22)] = 2.0
    mk = lambda p: Spectrum(power=p, bin_hz=BIN_HZ, window_size=N)
    assert sharpness(mk(high)) > sharpness(mk(low))


def test_sharpness_gain_invariant():
    rng = np.random.default_rng(2)
    power = rng.uniform(0, 1, size=N // 2 + 1)
    mk = lambda p: Spectrum(power=p, bin_hz=BIN_HZ, window_size=N)
    assert sharpness(mk(power * 100.0)) == pytest.approx(sharpness(mk(power)), abs=1e-9)


def test_sharpness_silence():
    assert sharpness(flat_spectrum(np.zeros(2049))) == 0.0


def test_sharpness_folds_energy_above_last_edge_into_top_band():
    power = np.zeros(N // 2 + 1)
    k = int(16000 // BIN_HZ)  # above the 15500 Hz edge
    power[k] = 1.0
    spec = Spectrum(power=power, bin_hz=BIN_HZ, window_size=N)
    z = 24
    g = 0.85 * np.exp(0.171 * (z - 15.8))
    assert sharpness(spec) == pytest.approx(0.11 * g * z, rel=1e-12)


# --- ratio features -----------------------------------------------------------


def test_brightness_endpoints():
    assert brightness(spectrum_of(tone_frame([(280, 0.5)]))) == pytest.approx(1.0)  # ~3 kHz
    assert brightness(spectrum_of(tone_frame([(19, 0.5)]))) == pytest.approx(0.0)  # ~205 Hz
    assert brightness(flat_spectrum(np.zeros(2049))) == 0.0


def test_brightness_equal_pair_half():
    spec = spectrum_of(tone_frame([(19, 0.5), (280, 0.5)]))
    assert brightness(spec) == pytest.approx(0.5, abs=0.01)


def test_warmth_endpoints_and_pair():
    warm_bin = 28  # ~301 Hz, inside [50, 700]
    cold_bin = 465  # ~5006 Hz
    assert warmth(spectrum_of(tone_frame([(warm_bin, 0.5)]))) == pytest.approx(1.0)
    assert warmth(spectrum_of(tone_frame([(cold_bin, 0.5)]))) == pytest.approx(0.0)
    pair = spectrum_of(tone_frame([(warm_bin, 0.5), (cold_bin, 0.5)]))
    assert warmth(pair) == pytest.approx(0.5, abs=0.01)


def test_depth_endpoints_and_pair():
    deep_bin = 9  # ~97 Hz
    high_bin = 93  # ~1001 Hz
    assert depth(spectrum_of(tone_frame([(deep_bin, 0.5)]))) == pytest.approx(1.0)
    assert depth(spectrum_of(tone_frame([(high_bin, 0.5)]))) == pytest.approx(0.0)
    pair = spectrum_of(tone_frame([(deep_bin, 0.5), (high_bin, 0.5)]))
    assert depth(pair) == pytest.approx(0.5, abs=0.01)


@given(seed=st.integers(0, 10_000), gain_db=st.floats(-20, 20))
@settings(max_examples=50, deadline=None)
def test_ratio_features_gain_invariant(seed, gain_db):
    rng = np.random.default_rng(seed)
    power = rng.uniform(0, 1, size=2049)
    gain2 = (10 ** (gain_db / 20)) ** 2
    base = flat_spectrum(power)
    scaled = flat_spectrum(power * gain2)
    for feature in (brightness, warmth, depth):
        assert feature(scaled) == pytest.approx(feature(base), abs=1e-9)
    assert sharpness(scaled) == pytest.approx(sharpness(base), abs=1e-9)


# --- hardness ----------------------------------------------------------------


def test_hardness_silence_is_zero():
    rms = np.zeros(10)
    assert hardness(rms, flat_spectrum(np.zeros(2049))) == 0.0


def test_hardness_step_beats_fade():
    step_rms = np.array([0.0, 0.8, 0.8, 0.8])
    fade_rms = np.array([0.0, 0.2, 0.5, 0.8])
    spec = spectrum_of(tone_frame([(93, 0.5)]))
    assert hardness(step_rms, spec) > hardness(fade_rms, spec)


def test_hardness_noise_beats_sine_at_equal_rms():
    rng = np.random.default_rng(9)
    sine = tone_frame([(9, 0.5)])  # ~97 Hz
    noise = rng.standard_normal(N)
    noise *= np.sqrt(np.mean(sine**2) / np.mean(noise**2))
    rms = np.array([0.1, 0.2])
    spec_noise = spectrum_of(noise)
    spec_sine = spectrum_of(sine)
    assert spectral_centroid(spec_noise) > spectral_centroid(spec_sine)
    assert hardness(rms, spec_noise) > hardness(rms, spec_sine)


def test_hardness_attack_term_gain_invariant():
    rms = np.array([0.1, 0.5, 0.3])
    spec = flat_spectrum(np.zeros(2049))  # isolate the attack term
    assert hardness(rms, spec) == pytest.approx(hardness(rms * 7.0, spec), abs=1e-12)


def test_centroid_zero_for_silence():
    assert spectral_centroid(flat_spectrum(np.zeros(2049))) == 0.0


# --- extraction ---------------------------------------------------------------


def silent_pair(n_samples: int) -> StemPair:
    z = AudioBuffer(samples=np.zeros(n_samples), sample_rate=SR)
    return StemPair(vocal=z, background=z)


def test_extract_silent_stems_all_zero():
    series = extract_track_features(silent_pair(2 * SR))
    assert len(series.frames) > 0
    for frame in series.frames:
        for name in FEATURE_NAMES:
            assert getattr(frame, name) == 0.0


def test_extract_frame_count():
    series = extract_track_features(silent_pair(8192))
    assert len(series.frames) == 5


def test_extract_too_short():
    with pytest.raises(AudioTooShort):
        extract_track_features(silent_pair(100))


def test_extract_deterministic(short_stems_dir):
    from tailors.audio_io import load_stem_pair

    stems = load_stem_pair(
        short_stems_dir / "short.vocal.wav", short_stems_dir / "short.background.wav"
    )
    one = extract_track_features(stems)
    two = extract_track_features(stems)
    assert one == two
    assert one.duration_s == pytest.approx(3.0)


def test_vocal_features_ignore_background(short_stems_dir):
    from tailors.audio_io import load_stem_pair

    stems = load_stem_pair(
        short_stems_dir / "short.vocal.wav", short_stems_dir / "short.background.wav"
    )
    silent_bg = AudioBuffer(
        samples=np.zeros_like(stems.background.samples), sample_rate=SR
    )
    swapped = StemPair(vocal=stems.vocal, background=silent_bg)
    a = extract_track_features(stems)
    b = extract_track_features(swapped)
    for fa, fb in zip(a.frames, b.frames):
        assert fa.vocal_roughness == fb.vocal_roughness
        assert fa.vocal_sharpness == fb.vocal_sharpness
        assert fa.vocal_warmth == fb.vocal_warmth
        assert fb.bg_brightness == 0.0


def test_timbral_frame_rejects_negative():
    with pytest.raises(ValueError):
        TimbralFrame(-0.1, 0, 0, 0, 0, 0, 0, 0)


def test_series_duration_defaults_to_hop_coverage():
    frame = TimbralFrame(0, 0, 0, 0, 0, 0, 0, 0)
    series = TimbralTimeSeries(frames=(frame,) * 4, hop_seconds=0.25)
    assert series.duration_s == pytest.approx(1.0)
    explicit = TimbralTimeSeries(frames=(frame,) * 4, hop_seconds=0.25, duration_s=1.3)
    assert explicit.duration_s == 1.3
