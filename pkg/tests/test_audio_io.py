"""WAV decoding against stdlib-wave and direct-DFT oracles."""

import struct
import wave

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tailors.audio_io import (
    AudioBuffer,
    frame_signal,
    hann_window,
    load_stem_pair,
    load_wav,
    pair_stems,
    power_spectrum,
)
from tailors.errors import (
    MalformedHeader,
    SampleRateMismatch,
    TruncatedData,
    UnsupportedFormat,
    WindowTooLarge,
)
from tailors.synth import write_wav


def build_wav_bytes(
    payload: bytes,
    channels: int = 1,
    rate: int = 44100,
    bits: int = 16,
    magic: bytes = b"RIFF",
    form: bytes = b"WAVE",
    fmt_tag: int = 1,
    declared_size: int | None = None,
    block_align: int | None = None,
) -> bytes:
    if block_align is None:
        block_align = channels * bits // 8
    fmt = struct.pack("<HHIIHH", fmt_tag, channels, rate, rate * block_align, block_align, bits)
    size = len(payload) if declared_size is None else declared_size
    body = b"fmt " + struct.pack("<I", len(fmt)) + fmt
    body += b"data" + struct.pack("<I", size) + payload
    return magic + struct.pack("<I", 4 + len(body)) + form + body


def test_16bit_scaling_endpoint(tmp_path):
    path = tmp_path / "one.wav"
    path.write_bytes(build_wav_bytes(struct.pack("<h", -32768)))
    buf = load_wav(path)
    assert buf.sample_rate == 44100
    assert buf.samples.tolist() == [-1.0]


def test_stereo_matches_reference_decoder(tmp_path):
    rng = np.random.default_rng(3)
    samples = rng.uniform(-0.98, 0.98, size=(100, 2))
    path = write_wav(tmp_path / "st.wav", samples, 44100, bits=16, channels=2)

    with wave.open(str(path), "rb") as handle:
        assert handle.getnchannels() == 2
        raw = handle.readframes(handle.getnframes())
    reference = np.frombuffer(raw, dtype="<i2").astype(np.float64) / 32768.0
    reference = reference.reshape(-1, 2).mean(axis=1)

    buf = load_wav(path)
    assert buf.samples.shape == (100,)
    np.testing.assert_array_equal(buf.samples, reference)


def test_24bit_decode_matches_manual_oracle(tmp_path):
    rng = np.random.default_rng(4)
    samples = rng.uniform(-0.9, 0.9, size=50)
    path = write_wav(tmp_path / "deep.wav", samples, 48000, bits=24)
    buf = load_wav(path)
    assert buf.sample_rate == 48000
    # hand-decode the first bytes independently of the loader
    raw = path.read_bytes()
    data_at = raw.index(b"data") + 8
    for i in range(5):
        chunk = raw[data_at + 3 * i : data_at + 3 * (i + 1)]
        value = int.from_bytes(chunk, "little", signed=True)
        assert buf.samples[i] == value / 8388608.0
    # writer scales by 2^23 - 1, reader divides by 2^23: half an LSB of
    # rounding plus one LSB of scale skew
    assert np.max(np.abs(buf.samples - samples)) <= 2.0 / (1 << 23)


def test_rejects_bad_magic(tmp_path):
    path = tmp_path / "x.wav"
    path.write_bytes(build_wav_bytes(b"\x00\x00", magic=b"RIFX"))
    with pytest.raises(MalformedHeader):
        load_wav(path)


def test_rejects_non_wave_form(tmp_path):
    path = tmp_path / "x.wav"
    path.write_bytes(build_wav_bytes(b"\x00\x00", form=b"AVI "))
    with pytest.raises(MalformedHeader):
        load_wav(path)


def test_rejects_missing_chunks(tmp_path):
    path = tmp_path / "x.wav"
    path.write_bytes(b"RIFF" + struct.pack("<I", 4) + b"WAVE")
    with pytest.raises(MalformedHeader):
        load_wav(path)


@pytest.mark.parametrize(
    "kwargs,error",
    [
        ({"fmt_tag": 3}, UnsupportedFormat),
        ({"bits": 8}, UnsupportedFormat),
        ({"rate": 22050}, UnsupportedFormat),
        ({"channels": 3}, UnsupportedFormat),
    ],
)
def test_rejects_unsupported_variants(tmp_path, kwargs, error):
    path = tmp_path / "x.wav"
    path.write_bytes(build_wav_bytes(b"\x00" * 8, **kwargs))
    with pytest.raises(error):
        load_wav(path)


def test_truncated_data_chunk(tmp_path):
    path = tmp_path / "x.wav"
    path.write_bytes(build_wav_bytes(b"\x00\x00" * 3, declared_size=100))
    with pytest.raises(TruncatedData):
        load_wav(path)


def test_partial_sample_frame_is_truncation(tmp_path):
    path = tmp_path / "x.wav"
    path.write_bytes(build_wav_bytes(b"\x00" * 3))  # 3 bytes is 1.5 16-bit samples
    with pytest.raises(TruncatedData):
        load_wav(path)


def test_decoding_is_deterministic(tmp_path):
    path = write_wav(tmp_path / "d.wav", np.sin(np.linspace(0, 20, 500)) * 0.5, 44100)
    one = load_wav(path)
    two = load_wav(path)
    assert one.sample_rate == two.sample_rate
    np.testing.assert_array_equal(one.samples, two.samples)


def test_stem_pair_identical_files(tmp_path):
    path = write_wav(tmp_path / "s.wav", np.zeros(1000), 44100)
    pair = load_stem_pair(path, path)
    np.testing.assert_array_equal(pair.vocal.samples, pair.background.samples)


def test_stem_pair_rate_mismatch(tmp_path):
    a = write_wav(tmp_path / "a.wav", np.zeros(100), 44100)
    b = write_wav(tmp_path / "b.wav", np.zeros(100), 48000)
    with pytest.raises(SampleRateMismatch):
        load_stem_pair(a, b)


def test_stem_pair_pads_shorter_tail(tmp_path):
    a = write_wav(tmp_path / "a.wav", np.full(1000, 0.5), 44100)
    b = write_wav(tmp_path / "b.wav", np.full(1500, 0.5), 44100)
    pair = load_stem_pair(a, b)
    assert pair.vocal.samples.size == 1500
    assert np.all(pair.vocal.samples[1000:] == 0.0)
    assert np.all(pair.vocal.samples[:1000] != 0.0)


def test_pair_stems_direct_buffers():
    vocal = AudioBuffer(samples=np.ones(10) * 0.1, sample_rate=44100)
    background = AudioBuffer(samples=np.ones(4) * 0.2, sample_rate=44100)
    pair = pair_stems(vocal, background)
    assert pair.background.samples.size == 10
    assert pair.duration_s == pytest.approx(10 / 44100)


@pytest.mark.parametrize("n,expected", [(4096, 1), (8192, 5)])
def test_frame_count_formula(n, expected):
    buf = AudioBuffer(samples=np.zeros(n), sample_rate=44100)
    assert frame_signal(buf, 4096, 1024).shape == (expected, 4096)


def test_window_too_large():
    buf = AudioBuffer(samples=np.zeros(100), sample_rate=44100)
    with pytest.raises(WindowTooLarge):
        frame_signal(buf, 4096, 1024)


def test_frames_tile_the_signal():
    samples = np.arange(10000) / 10000.0
    buf = AudioBuffer(samples=samples, sample_rate=44100)
    frames = frame_signal(buf, 512, 128)
    for k in (0, 1, 7, frames.shape[0] - 1):
        np.testing.assert_array_equal(frames[k], samples[k * 128 : k * 128 + 512])


def test_power_spectrum_zero_frame():
    spec = power_spectrum(np.zeros(1024), 44100)
    assert np.all(spec.power == 0.0)
    assert spec.bin_hz == pytest.approx(44100 / 1024)


def test_bin_centered_tone_argmax_and_dft_oracle():
    sr, n, k = 44100, 4096, 93
    t = np.arange(n) / sr
    frame = 0.5 * np.sin(2 * np.pi * (k * sr / n) * t)
    spec = power_spectrum(frame, sr)
    assert int(np.argmax(spec.power)) == k
    # direct DFT oracle at a few bins
    windowed = frame * hann_window(n)
    for bin_index in (k - 1, k, k + 1, 200):
        direct = np.sum(windowed * np.exp(-2j * np.pi * bin_index * np.arange(n) / n))
        assert spec.power[bin_index] == pytest.approx(abs(direct) ** 2, rel=1e-9, abs=1e-12)


def test_parseval_identity():
    rng = np.random.default_rng(11)
    frame = rng.standard_normal(2048)
    spec = power_spectrum(frame, 48000)
    windowed = frame * hann_window(2048)
    # one-sided spectrum: interior bins count twice
    total = 2.0 * np.sum(spec.power) - spec.power[0] - spec.power[-1]
    assert total == pytest.approx(2048 * np.sum(windowed**2), rel=1e-6)


@given(scale=st.floats(0.01, 100.0), seed=st.integers(0, 10_000))
@settings(max_examples=50, deadline=None)
def test_power_scales_quadratically(scale, seed):
    rng = np.random.default_rng(seed)
    frame = rng.standard_normal(256)
    base = power_spectrum(frame, 44100).power
    scaled = power_spectrum(frame * scale, 44100).power
    np.testing.assert_allclose(scaled, base * scale**2, rtol=1e-9, atol=1e-12)


def test_audio_buffer_validation():
    with pytest.raises(ValueError):
        AudioBuffer(samples=np.array([2.0]), sample_rate=44100)
    with pytest.raises(ValueError):
        AudioBuffer(samples=np.array([np.nan]), sample_rate=44100)
    with pytest.raises(ValueError):
        AudioBuffer(samples=np.zeros((2, 2)), sample_rate=44100)
