"""Cache module for harmonic coefficient tables.

A coefficient table holds c_n of every code of one (L, n, alphabet) in
enumeration order. Tables are expensive for long codes and are reused by
constellation maps and codebook search, so they are kept in a bounded LRU.
"""

import hashlib
import threading
from collections import OrderedDict
from collections.abc import Callable
from typing import Optional

import numpy as np

from .config import get_config
from .logging import get_logger

logger = get_logger("cache")

# Global cache instance
_cache_instance: Optional["CoefficientCache"] = None
_cache_lock = threading.Lock()


def get_cache() -> "CoefficientCache":
    """Get the global coefficient cache, creating it on first use."""
    global _cache_instance
    with _cache_lock:
        if _cache_instance is None:
            _cache_instance = CoefficientCache(get_config().cache_max_size)
        return _cache_instance


def reset_cache() -> None:
    """Drop the global cache (the next ``get_cache`` re-reads the config)."""
    global _cache_instance
    with _cache_lock:
        _cache_instance = None


class CoefficientCache:
    """Bounded LRU of read-only coefficient tables."""

    def __init__(self, max_size: int = 32) -> None:
        self._max_size = max_size
        self._tables: OrderedDict[str, np.ndarray] = OrderedDict()
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    @staticmethod
    def make_key(length: int, order: int, alphabet: str) -> str:
        """Cache key for one (L, n, alphabet) table - not used for security purposes."""
        combined = f"{length}|{order}|{alphabet}"
        return hashlib.md5(combined.encode(), usedforsecurity=False).hexdigest()

    def get(self, key: str) -> np.ndarray | None:
        with self._lock:
            table = self._tables.get(key)
            if table is None:
                self.misses += 1
                return None
            self._tables.move_to_end(key)
            self.hits += 1
            return table

    def put(self, key: str, table: np.ndarray) -> None:
        table.setflags(write=False)
        with self._lock:
            self._tables[key] = table
            self._tables.move_to_end(key)
            while len(self._tables) > self._max_size:
                evicted, _ = self._tables.popitem(last=False)
                logger.debug(f"Evicted coefficient table {evicted}")

    def get_or_compute(
        self, key: str, factory: Callable[[], np.ndarray]
    ) -> np.ndarray:
        """Return the cached table or build, store and return it.

        Two threads missing the same key may both compute; the tables are
        identical so the later ``put`` is harmless.
        """
        table = self.get(key)
        if table is not None:
            return table
        table = factory()
        self.put(key, table)
        return table

    def clear(self) -> None:
        with self._lock:
            self._tables.clear()
            self.hits = 0
            self.misses = 0

    @property
    def size(self) -> int:
        """Number of tables currently held."""
        return len(self._tables)

    @property
    def max_size(self) -> int:
        return self._max_size
