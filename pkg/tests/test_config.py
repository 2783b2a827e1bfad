"""Tests for the configuration module."""

import tempfile
from pathlib import Path

import pytest

from src.shifted_yangian.core.config import (
    ComputeSettings,
    Config,
    OutputSettings,
)


def test_config_default_initialization():
    """Test that Config can be initialized with default values."""
    config = Config()

    assert config.base_dir is not None
    assert config.output_dir == config.base_dir / "output" / "reports"
    assert config.log_dir == config.base_dir / "logs"
    assert config.compute.depth == 8
    assert config.compute.series_order == 16
    assert config.output.format == "json"


def test_config_custom_base_dir():
    """Test that Config can be initialized with a custom base directory."""
    with tempfile.TemporaryDirectory() as temp_dir:
        temp_path = Path(temp_dir)
        config = Config(base_dir=temp_path)

        assert config.base_dir == temp_path
        assert config.output_dir == temp_path / "output/reports"
        assert config.log_dir == temp_path / "logs"

        config.ensure_directories()
        assert config.output_dir.is_dir()
        assert config.log_dir.is_dir()


def test_compute_settings():
    """Test that ComputeSettings accepts custom values and rejects bad ones."""
    settings = ComputeSettings(depth=4, series_order=10, sample_seed=3, n_max=5)
    assert settings.depth == 4
    assert settings.series_order == 10
    assert settings.sample_seed == 3
    assert settings.n_max == 5

    with pytest.raises(ValueError):
        ComputeSettings(depth=0)
    with pytest.raises(ValueError):
        ComputeSettings(depth=12, series_order=8)


def test_output_settings_rejects_unknown_format():
    """Test that only json and text reports are accepted."""
    assert OutputSettings(format="text").format == "text"
    with pytest.raises(ValueError):
        OutputSettings(format="xlsx")


def test_config_from_dict():
    """Test that Config can be created from a dictionary."""
    config_dict = {
        "base_dir": "/tmp/test",
        "compute": {"depth": 6, "series_order": 12},
        "output": {"format": "text", "indent": 4},
        "logging": {"level": "DEBUG"},
    }

    config = Config.from_dict(config_dict)

    assert config.base_dir == Path("/tmp/test")
    assert config.compute.depth == 6
    assert config.compute.series_order == 12
    assert config.compute.n_max == 8
    assert config.output.format == "text"
    assert config.output.indent == 4
    assert config.logging.level == "DEBUG"


def test_config_from_yaml(tmp_path):
    """Test loading settings from a YAML file with a base directory override."""
    settings = tmp_path / "settings.yaml"
    settings.write_text(
        "compute:\n  depth: 5\n  series_order: 9\n"
        "output:\n  format: json\n"
        "unrelated: ignored\n",
        encoding="utf-8",
    )

    config = Config.from_yaml(settings, base_dir=tmp_path)

    assert config.base_dir == tmp_path
    assert config.compute.depth == 5
    assert config.compute.series_order == 9
    assert config.output_dir == tmp_path / "output" / "reports"


def test_config_from_yaml_requires_mapping(tmp_path):
    """Test that a settings file holding a list is rejected."""
    settings = tmp_path / "settings.yaml"
    settings.write_text("- depth\n- 5\n", encoding="utf-8")

    with pytest.raises(ValueError):
        Config.from_yaml(settings)
