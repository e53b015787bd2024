"""Configuration management for the stc-ris toolkit."""

import os
from collections.abc import Callable
from enum import Enum
from typing import TypeVar

_TRUE_VALUES = ("true", "1", "t", "yes")

N = TypeVar("N", int, float)


class LogLevel(Enum):
    """Log level enumeration for the stc-ris toolkit."""

    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"

    @classmethod
    def from_string(cls, level_str: str) -> "LogLevel":
        """Convert string to LogLevel enum, defaulting to INFO if invalid."""
        try:
            upper_level = level_str.upper()
            # Handle common variations
            if upper_level in ["DEBUG", "DEBUGGING", "VERBOSE"]:
                return LogLevel.DEBUG
            elif upper_level in ["INFO", "INFORMATION"]:
                return LogLevel.INFO
            elif upper_level in ["WARN", "WARNING"]:
                return LogLevel.WARNING
            elif upper_level in ["ERROR", "ERR"]:
                return LogLevel.ERROR
            else:
                return cls(upper_level)
        except ValueError:
            return LogLevel.INFO


def _env_number(name: str, default: N, parse: Callable[[str], N]) -> N:
    """Read a numeric environment variable; malformed text is a config error."""
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return default
    try:
        return parse(raw.strip())
    except ValueError as e:
        from .errors import ConfigurationError

        raise ConfigurationError(
            f"{name} must be a number (got {raw!r})", subcategory="ENV", original_error=e
        ) from e


class Config:
    """Toolkit-wide settings read from the environment."""

    def __init__(self) -> None:
        # Enumeration limits
        self.enumeration_cap: int = _env_number("STC_ENUM_CAP", 2**24, int)
        self.chunk_size: int = _env_number("STC_CHUNK_SIZE", 65536, int)
        self.workers: int = _env_number("STC_WORKERS", 1, int)

        # Coefficient table cache
        self.cache_max_size: int = _env_number("STC_CACHE_MAX_SIZE", 32, int)

        # Codebook quality
        self.leakage_threshold: float = _env_number(
            "STC_LEAKAGE_THRESHOLD", 0.25, float
        )

        # Seed override for link simulations
        seed_text = os.environ.get("STC_SEED", "").strip()
        self.seed_override: int | None = (
            _env_number("STC_SEED", 0, int) if seed_text else None
        )

        # Logging configuration - check multiple possible environment variable names
        log_level_env = (
            os.environ.get("LOG_LEVEL") or os.environ.get("STC_LOG_LEVEL") or "INFO"
        )
        self.log_level: LogLevel = LogLevel.from_string(log_level_env)
        self.log_to_file: bool = (
            os.environ.get("LOG_TO_FILE", "false").lower() in _TRUE_VALUES
        )
        self.log_file: str = os.environ.get("STC_LOG_FILE", "stc_ris.log")
        self.log_format: str = os.environ.get(
            "LOG_FORMAT", "standard"
        )  # "standard" or "json"

        debug_mode = os.environ.get("STC_DEBUG", "false").lower() in _TRUE_VALUES
        self.debug_mode = debug_mode
        if debug_mode and self.log_level != LogLevel.DEBUG:
            self.log_level = LogLevel.DEBUG

    def validate(self) -> None:
        """Validate the configuration and raise ConfigurationError if invalid."""
        from .errors import ConfigurationError

        if self.enumeration_cap < 1:
            raise ConfigurationError(
                f"STC_ENUM_CAP must be at least 1 (got {self.enumeration_cap})", subcategory="ENV"
            )

        if self.chunk_size < 1:
            raise ConfigurationError(
                f"STC_CHUNK_SIZE must be at least 1 (got {self.chunk_size})", subcategory="ENV"
            )

        if self.workers < 1:
            raise ConfigurationError(
                f"STC_WORKERS must be at least 1 (got {self.workers})", subcategory="ENV"
            )

        if self.cache_max_size < 1:
            raise ConfigurationError(
                f"STC_CACHE_MAX_SIZE must be at least 1 (got {self.cache_max_size})", subcategory="ENV"
            )

        if not self.leakage_threshold > 0:
            raise ConfigurationError(
                f"STC_LEAKAGE_THRESHOLD must be positive (got {self.leakage_threshold})", subcategory="ENV"
            )

        if self.log_format not in ("standard", "json"):
            raise ConfigurationError(
                f"LOG_FORMAT must be 'standard' or 'json' (got {self.log_format!r})", subcategory="ENV"
            )


# Global configuration singleton
_config: Config | None = None


def get_config() -> Config:
    """Get the global configuration singleton."""
    global _config
    if _config is None:
        _config = Config()
    return _config


def reset_config() -> None:
    """Forget the cached configuration so the environment is read again."""
    global _config
    _config = None
