"""Stem-driven timbre analysis, visual mapping, and streaming, plus a
survey statistics workbench for evaluating the resulting visuals."""

__version__ = "0.1.0"

from .audio_io import (
    AudioBuffer,
    Spectrum,
    StemPair,
    frame_signal,
    load_stem_pair,
    load_wav,
    pair_stems,
    power_spectrum,
)
from .config import DEFAULT_CONFIG, PipelineConfig, load_config
from .features import (
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
from .mapping import (
    BackgroundKind,
    BackgroundVisualParams,
    VisualFrame,
    VocalVisualParams,
    channel_bounds,
    classify_kind,
    ewma_smooth,
    hue_from_warmth,
    map_background,
    map_track,
    map_vocal,
    min_max_normalize,
)
from .stream import (
    FrameServer,
    StreamHeader,
    emit_frames,
    emit_to_path,
    frame_line,
    header_line,
    parse_stream,
    parse_stream_path,
    serve_stream,
)

__all__ = [
    "AudioBuffer",
    "BackgroundKind",
    "BackgroundVisualParams",
    "DEFAULT_CONFIG",
    "FEATURE_NAMES",
    "FrameServer",
    "PipelineConfig",
    "SpectralPeak",
    "Spectrum",
    "StemPair",
    "StreamHeader",
    "TimbralFrame",
    "TimbralTimeSeries",
    "VisualFrame",
    "VocalVisualParams",
    "brightness",
    "channel_bounds",
    "classify_kind",
    "depth",
    "emit_frames",
    "emit_to_path",
    "ewma_smooth",
    "extract_track_features",
    "frame_line",
    "frame_signal",
    "hardness",
    "header_line",
    "hue_from_warmth",
    "load_config",
    "load_stem_pair",
    "load_wav",
    "map_background",
    "map_track",
    "map_vocal",
    "min_max_normalize",
    "pair_stems",
    "parse_stream",
    "parse_stream_path",
    "power_spectrum",
    "roughness",
    "serve_stream",
    "sharpness",
    "spectral_centroid",
    "spectral_peaks",
    "warmth",
]
