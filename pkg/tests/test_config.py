"""Pipeline configuration defaults and file-based overrides."""

import json

import pytest

from tailors.config import BARK_EDGES_HZ, DEFAULT_CONFIG, ENV_VAR, PipelineConfig, load_config


def test_defaults():
    assert DEFAULT_CONFIG.window_size == 4096
    assert DEFAULT_CONFIG.hop_size == 1024
    assert DEFAULT_CONFIG.fps == 30.0
    assert DEFAULT_CONFIG.smoothing_alpha == 0.2
    assert DEFAULT_CONFIG.peak_floor_db == 60.0
    assert DEFAULT_CONFIG.max_peaks == 32
    assert DEFAULT_CONFIG.kind_thresholds == (1 / 3, 2 / 3)
    assert DEFAULT_CONFIG.hue_cold_deg == 270.0
    assert DEFAULT_CONFIG.hue_warm_deg == 30.0


def test_bark_edges_shape():
    assert len(BARK_EDGES_HZ) == 25
    assert BARK_EDGES_HZ[0] == 0.0
    assert BARK_EDGES_HZ[1] == 100.0
    assert BARK_EDGES_HZ[-1] == 15500.0
    assert list(BARK_EDGES_HZ) == sorted(BARK_EDGES_HZ)


def test_no_env_var_gives_defaults():
    assert load_config(env={}) == DEFAULT_CONFIG


def test_file_overrides(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"fps": 12.0, "smoothing_alpha": 0.5}))
    config = load_config(env={ENV_VAR: str(path)})
    assert config.fps == 12.0
    assert config.smoothing_alpha == 0.5
    assert config.window_size == DEFAULT_CONFIG.window_size


def test_tuple_fields_convert(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"kind_thresholds": [0.25, 0.75]}))
    config = load_config(env={ENV_VAR: str(path)})
    assert config.kind_thresholds == (0.25, 0.75)


def test_unknown_keys_rejected(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"fsp": 12.0}))
    with pytest.raises(ValueError, match="unknown keys"):
        load_config(env={ENV_VAR: str(path)})


def test_invalid_json_rejected(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("{nope")
    with pytest.raises(ValueError, match="not valid JSON"):
        load_config(env={ENV_VAR: str(path)})


def test_non_object_rejected(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("[1, 2]")
    with pytest.raises(ValueError, match="JSON object"):
        load_config(env={ENV_VAR: str(path)})


def test_missing_file_raises_oserror():
    with pytest.raises(OSError):
        load_config(env={ENV_VAR: "/nonexistent/config.json"})


def test_validation_catches_bad_values(tmp_path):
    bad_cases = [
        {"window_size": 0},
        {"hop_size": 5000},  # hop larger than window
        {"fps": -1.0},
        {"smoothing_alpha": 1.5},
        {"kind_thresholds": [0.9, 0.1]},  # must be increasing
        {"max_peaks": 0},
    ]
    for overrides in bad_cases:
        path = tmp_path / "config.json"
        path.write_text(json.dumps(overrides))
        with pytest.raises(ValueError):
            load_config(env={ENV_VAR: str(path)})


def test_config_is_frozen():
    with pytest.raises(AttributeError):
        DEFAULT_CONFIG.fps = 60.0


def test_direct_construction_validates():
    with pytest.raises(ValueError):
        PipelineConfig(window_size=100, hop_size=200)
