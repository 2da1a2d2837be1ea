import json

import pytest

from oscillator_purity.config import (
    DEFAULT_CAP,
    GRID_POINTS,
    WORKERS_ENV,
    RunConfig,
    workers_from_env,
)
from oscillator_purity.errors import ConfigError
from oscillator_purity.utils import float_to_str, format_float, linspace


def test_defaults():
    config = RunConfig()
    assert config.cap == DEFAULT_CAP
    assert config.grid_points == GRID_POINTS
    assert config.workers is None
    assert config.mk_over_hbar2 == 1.0


def test_updated_skips_none():
    config = RunConfig().updated(hbar=0.5, cap=None)
    assert config.hbar == 0.5
    assert config.cap == DEFAULT_CAP
    assert config.mk_over_hbar2 == 4.0


def test_updated_rejects_unknown_keys():
    with pytest.raises(ConfigError, match="Unknown"):
        RunConfig().updated(colour="blue")


@pytest.mark.parametrize(
    "overrides",
    [
        {"hbar": 0.0},
        {"m": -1.0},
        {"tolerance_oracle": 0.0},
        {"grid_points": 32},
        {"cap": -1},
        {"workers": 0},
    ],
)
def test_invalid_values(overrides):
    with pytest.raises(ConfigError):
        RunConfig(**overrides)


def test_from_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"grid_points": 600, "tolerance_oracle": 1e-6}))
    config = RunConfig.from_file(path)
    assert config.grid_points == 600
    assert config.tolerance_oracle == 1e-6
    assert RunConfig.from_file(str(path)).to_dict() == config.to_dict()


@pytest.mark.parametrize(
    ("content", "message"),
    [
        ("[1, 2]", "flat JSON object"),
        ('{"grid": {"points": 10}}', "nested"),
        ("not json", "valid JSON"),
    ],
)
def test_from_file_errors(tmp_path, content, message):
    path = tmp_path / "config.json"
    path.write_text(content)
    with pytest.raises(ConfigError, match=message):
        RunConfig.from_file(path)


def test_from_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="does not exist"):
        RunConfig.from_file(tmp_path / "missing.json")


def test_workers_from_env(monkeypatch):
    monkeypatch.delenv(WORKERS_ENV, raising=False)
    assert workers_from_env() is None
    monkeypatch.setenv(WORKERS_ENV, "3")
    assert workers_from_env() == 3
    for value in ("0", "three"):
        monkeypatch.setenv(WORKERS_ENV, value)
        with pytest.raises(ConfigError, match=WORKERS_ENV):
            workers_from_env()


@pytest.mark.parametrize(
    ("value", "expected"), [(4.0, "4"), (-4, "m4"), (0.5, "0p5"), (-1.25, "m1p25")]
)
def test_float_to_str(value, expected):
    assert float_to_str(value) == expected


def test_format_float():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(float("nan")) == ""
    assert format_float(None) == ""


def test_linspace_includes_endpoints():
    values = linspace(0.1, 3.0, 7)
    assert len(values) == 7
    assert values[0] == 0.1
    assert values[-1] == 3.0
    assert linspace(2.0, 5.0, 1) == [2.0]
