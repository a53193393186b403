"""
Unit tests for the config module.
"""

import sys
from pathlib import Path
from unittest.mock import mock_open, patch

import pytest
import yaml

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from config import (AppConfig, EnumerationConfig, MovesConfig, WeresetConfig,
                    load_config, parse_seed_range)


class TestAppConfig:
    """Test cases for the configuration dataclasses."""

    def test_defaults(self):
        """Test AppConfig default values."""
        config = AppConfig()
        assert config.log_level == "INFO"
        assert config.jobs == 1
        assert config.enumeration == EnumerationConfig(max_carrier=4)
        assert config.wereset.max_precrossings == 20
        assert config.wereset.battery == ["data/psybrackets/X1.psy"]
        assert config.moves == MovesConfig(mode="pseudo", length=8, seeds="1..50")

    def test_battery_default_is_not_shared(self):
        """Test that each WeresetConfig gets its own battery list."""
        first = WeresetConfig()
        first.battery.append("extra.psy")
        assert WeresetConfig().battery == ["data/psybrackets/X1.psy"]


class TestParseSeedRange:
    """Test cases for parse_seed_range."""

    def test_inclusive_range(self):
        """Test that both ends of a..b are included."""
        assert parse_seed_range("3..6") == [3, 4, 5, 6]

    def test_single_seed(self):
        """Test a bare integer."""
        assert parse_seed_range("7") == [7]

    @pytest.mark.parametrize("text", ["a..b", "1..", "", "5..2"])
    def test_rejects_bad_ranges(self, text):
        """Test malformed and empty ranges."""
        with pytest.raises(ValueError):
            parse_seed_range(text)


class TestLoadConfig:
    """Test cases for load_config function."""

    def test_load_full_file(self, temp_dir):
        """Test loading every section from a real file."""
        path = temp_dir / "config.yml"
        path.write_text(
            yaml.safe_dump(
                {
                    "log_level": "DEBUG",
                    "jobs": 4,
                    "enumeration": {"max_carrier": 3},
                    "wereset": {"max_precrossings": 6, "battery": ["a.psy", "b.psy"]},
                    "moves": {"mode": "singular", "length": 12, "seeds": "1..3"},
                }
            )
        )
        config = load_config(str(path))
        assert config.log_level == "DEBUG"
        assert config.jobs == 4
        assert config.enumeration.max_carrier == 3
        assert config.wereset.max_precrossings == 6
        assert config.wereset.battery == ["a.psy", "b.psy"]
        assert config.moves == MovesConfig(mode="singular", length=12, seeds="1..3")

    def test_missing_sections_use_defaults(self):
        """Test that absent keys fall back to defaults."""
        with patch("builtins.open", mock_open(read_data="log_level: WARNING\n")):
            config = load_config("config.yml")
        assert config.log_level == "WARNING"
        assert config.enumeration.max_carrier == 4
        assert config.moves.seeds == "1..50"

    def test_empty_file(self):
        """Test that an empty file gives the defaults."""
        with patch("builtins.open", mock_open(read_data="")):
            assert load_config("config.yml") == AppConfig()

    def test_file_not_found(self):
        """Test the error for a missing file."""
        with pytest.raises(FileNotFoundError, match="Configuration file not found at"):
            load_config("/nonexistent/config.yml")

    def test_invalid_yaml(self):
        """Test that YAML syntax errors become ValueError."""
        with patch("builtins.open", mock_open(read_data="jobs: [1, 2\n")):
            with pytest.raises(ValueError, match="Error parsing YAML"):
                load_config("config.yml")

    def test_non_mapping_document(self):
        """Test that a top-level list is rejected."""
        with patch("builtins.open", mock_open(read_data="- 1\n- 2\n")):
            with pytest.raises(ValueError, match="mapping"):
                load_config("config.yml")

    def test_invalid_mode(self):
        """Test that an unknown move mode is rejected."""
        with patch("builtins.open", mock_open(read_data="moves:\n  mode: virtual\n")):
            with pytest.raises(ValueError, match="moves.mode"):
                load_config("config.yml")

    def test_invalid_seeds(self):
        """Test that a malformed seed range is rejected at load time."""
        with patch("builtins.open", mock_open(read_data="moves:\n  seeds: 9..1\n")):
            with pytest.raises(ValueError, match="seed range"):
                load_config("config.yml")

    def test_shipped_config_loads(self):
        """Test that the repository's config.yml is valid."""
        config = load_config(str(Path(__file__).parent.parent / "config.yml"))
        assert config.moves.mode in ("pseudo", "singular")
        assert parse_seed_range(config.moves.seeds)
