"""Configuration for pytest."""

import logging
from pathlib import Path

import pytest

import stc_ris
from stc_ris.cache import reset_cache
from stc_ris.codebook import ModulationScheme, design_by_shift
from stc_ris.codes import parse_code
from stc_ris.config import reset_config
from stc_ris.linksim.config import fast_profile
from stc_ris.monitoring.metrics import get_metrics

_ENV_VARS = (
    "LOG_LEVEL",
    "LOG_FORMAT",
    "LOG_TO_FILE",
    "STC_LOG_LEVEL",
    "STC_LOG_FILE",
    "STC_DEBUG",
    "STC_SEED",
    "STC_ENUM_CAP",
    "STC_LEAKAGE_THRESHOLD",
    "STC_WORKERS",
    "STC_CHUNK_SIZE",
    "STC_CACHE_MAX_SIZE",
)

CONFIG_DIR = Path(stc_ris.__file__).parent / "configs"


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """Start every test from default settings, an empty cache and no metrics."""
    for name in _ENV_VARS:
        monkeypatch.delenv(name, raising=False)
    reset_config()
    reset_cache()
    get_metrics().reset()

    yield

    reset_config()
    reset_cache()
    # The CLI installs its own handlers and stops propagation; undo that so
    # caplog keeps working in later tests.
    package_logger = logging.getLogger("stc_ris")
    for handler in list(package_logger.handlers):
        package_logger.removeHandler(handler)
        handler.close()
    package_logger.propagate = True
    package_logger.setLevel(logging.NOTSET)


@pytest.fixture
def reload_config(monkeypatch):
    """Set environment variables and drop cached settings."""

    def _set(**values):
        for key, value in values.items():
            monkeypatch.setenv(key, str(value))
        reset_config()
        reset_cache()

    return _set


@pytest.fixture
def fast_cfg():
    """Noiseless single-row link in the CI-speed frequency profile."""
    return fast_profile()


@pytest.fixture
def qpsk_book():
    """Shift-constructed QPSK codebook on the half-duty 8-bit base (τ = 1 ms)."""
    return design_by_shift(parse_code("00001111", 1e-3), ModulationScheme(4))


@pytest.fixture
def bundled_config():
    """Path of a configuration shipped with the package."""

    def _path(name):
        return CONFIG_DIR / name

    return _path
