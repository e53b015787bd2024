"""Tests for environment-driven configuration."""

import pytest

from stc_ris.config import Config, LogLevel, get_config, reset_config
from stc_ris.errors import ConfigurationError


class TestLogLevel:
    """Tests for LogLevel parsing."""

    @pytest.mark.parametrize(
        ("text", "level"),
        [
            ("debug", LogLevel.DEBUG),
            ("VERBOSE", LogLevel.DEBUG),
            ("information", LogLevel.INFO),
            ("warn", LogLevel.WARNING),
            ("err", LogLevel.ERROR),
            ("loud", LogLevel.INFO),
        ],
    )
    def test_from_string(self, text, level):
        """Test lenient parsing of log level names, with INFO as the fallback."""
        assert LogLevel.from_string(text) == level


class TestConfig:
    """Tests for Config defaults and overrides."""

    def test_defaults(self):
        """Test the default values when no variables are set."""
        config = Config()
        assert config.enumeration_cap == 2**24
        assert config.chunk_size == 65536
        assert config.workers == 1
        assert config.cache_max_size == 32
        assert config.leakage_threshold == 0.25
        assert config.seed_override is None
        assert config.log_level == LogLevel.INFO
        assert config.log_to_file is False
        assert config.log_format == "standard"
        config.validate()

    def test_environment_overrides(self, monkeypatch):
        """Test that STC_* and LOG_* variables override the defaults."""
        monkeypatch.setenv("STC_ENUM_CAP", "1000")
        monkeypatch.setenv("STC_WORKERS", "4")
        monkeypatch.setenv("STC_SEED", "42")
        monkeypatch.setenv("LOG_FORMAT", "json")
        config = Config()
        assert config.enumeration_cap == 1000
        assert config.workers == 4
        assert config.seed_override == 42
        assert config.log_format == "json"

    def test_debug_mode_forces_debug_level(self, monkeypatch):
        """Test that STC_DEBUG forces the DEBUG log level."""
        monkeypatch.setenv("LOG_LEVEL", "ERROR")
        monkeypatch.setenv("STC_DEBUG", "yes")
        assert Config().log_level == LogLevel.DEBUG

    def test_stc_log_level_fallback(self, monkeypatch):
        """Test that STC_LOG_LEVEL is read when LOG_LEVEL is absent."""
        monkeypatch.setenv("STC_LOG_LEVEL", "warning")
        assert Config().log_level == LogLevel.WARNING

    @pytest.mark.parametrize(
        ("name", "value"),
        [
            ("STC_ENUM_CAP", "0"),
            ("STC_CHUNK_SIZE", "0"),
            ("STC_WORKERS", "0"),
            ("STC_CACHE_MAX_SIZE", "0"),
            ("STC_LEAKAGE_THRESHOLD", "0"),
            ("LOG_FORMAT", "xml"),
        ],
    )
    def test_validate_rejects(self, monkeypatch, name, value):
        """Test that out-of-range values fail validation with exit code 2."""
        monkeypatch.setenv(name, value)
        with pytest.raises(ConfigurationError) as excinfo:
            Config().validate()
        assert excinfo.value.exit_code == 2

    @pytest.mark.parametrize(
        "name", ["STC_SEED", "STC_WORKERS", "STC_ENUM_CAP", "STC_LEAKAGE_THRESHOLD"]
    )
    def test_malformed_number_is_configuration_error(self, monkeypatch, name):
        """Test that unparsable numeric variables raise ConfigurationError."""
        monkeypatch.setenv(name, "abc")
        with pytest.raises(ConfigurationError) as excinfo:
            Config()
        assert excinfo.value.subcategory == "ENV"
        assert name in excinfo.value.message
        assert excinfo.value.exit_code == 2

    def test_blank_seed_means_unset(self, monkeypatch):
        """Test that an empty STC_SEED leaves the seed override unset."""
        monkeypatch.setenv("STC_SEED", "  ")
        assert Config().seed_override is None


class TestSingleton:
    """Tests for get_config and reset_config."""

    def test_cached_until_reset(self, monkeypatch):
        """Test that the configuration is read once until reset_config."""
        first = get_config()
        assert get_config() is first
        monkeypatch.setenv("STC_WORKERS", "3")
        assert get_config().workers == 1
        reset_config()
        assert get_config().workers == 3
