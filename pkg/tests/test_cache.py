"""Tests for the coefficient table cache."""

import numpy as np
import pytest

from stc_ris.cache import CoefficientCache, get_cache, reset_cache


class TestCoefficientCache:
    """Tests for CoefficientCache."""

    def test_keys_are_distinct(self):
        """Test that length, harmonic and alphabet all enter the cache key."""
        keys = {
            CoefficientCache.make_key(8, 1, "binary"),
            CoefficientCache.make_key(8, 1, "ternary"),
            CoefficientCache.make_key(8, 2, "binary"),
            CoefficientCache.make_key(9, 1, "binary"),
        }
        assert len(keys) == 4

    def test_hits_and_misses(self):
        """Test that lookups update the hit and miss counters."""
        cache = CoefficientCache()
        assert cache.get("a") is None
        cache.put("a", np.zeros(4, dtype=complex))
        assert cache.get("a") is not None
        assert (cache.hits, cache.misses) == (1, 1)

    def test_tables_become_read_only(self):
        """Test that cached tables cannot be modified in place."""
        cache = CoefficientCache()
        table = np.ones(3, dtype=complex)
        cache.put("t", table)
        with pytest.raises(ValueError):
            cache.get("t")[0] = 0

    def test_lru_eviction(self):
        """Test that the least recently used table is evicted first."""
        cache = CoefficientCache(max_size=2)
        cache.put("a", np.zeros(1))
        cache.put("b", np.zeros(1))
        cache.get("a")
        cache.put("c", np.zeros(1))
        assert cache.size == 2
        assert cache.get("b") is None
        assert cache.get("a") is not None

    def test_get_or_compute_calls_factory_once(self):
        """Test that a cached table is computed only once."""
        cache = CoefficientCache()
        calls = []

        def factory():
            calls.append(1)
            return np.arange(4, dtype=complex)

        first = cache.get_or_compute("k", factory)
        second = cache.get_or_compute("k", factory)
        assert first is second
        assert len(calls) == 1

    def test_clear(self):
        """Test that clearing empties the cache and its counters."""
        cache = CoefficientCache()
        cache.put("a", np.zeros(1))
        cache.get("a")
        cache.clear()
        assert cache.size == 0
        assert cache.hits == 0


class TestGlobalCache:
    """Tests for the process-wide cache."""

    def test_singleton(self):
        """Test that get_cache returns the same instance."""
        assert get_cache() is get_cache()

    def test_size_from_environment(self, reload_config):
        """Test that STC_CACHE_MAX_SIZE sets the cache size."""
        reload_config(STC_CACHE_MAX_SIZE=5)
        assert get_cache().max_size == 5

    def test_reset(self):
        """Test that reset_cache replaces the global cache."""
        first = get_cache()
        reset_cache()
        assert get_cache() is not first
