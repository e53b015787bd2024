"""
Performance metrics collection for stc-ris.

Timings of the expensive operations (enumeration, codebook search, link
runs) and counters of simulated work. Metrics are logged, never written to
output files, so they do not affect replay.
"""

import statistics
import threading
import time
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Any

try:
    import psutil
except ImportError:  # optional "monitoring" extra
    psutil = None

from ..logging import get_logger

logger = get_logger("monitoring.metrics")

MAX_SAMPLES = 1000  # Maximum number of samples kept per time metric


@dataclass
class TimeMetric:
    """Time-based metric with statistical tracking."""

    count: int = 0
    total_time: float = 0.0
    min_time: float = float("inf")
    max_time: float = 0.0
    recent_times: deque[float] = field(
        default_factory=lambda: deque(maxlen=MAX_SAMPLES)
    )

    def add(self, duration: float) -> None:
        """Add a new time measurement to this metric."""
        self.count += 1
        self.total_time += duration
        self.min_time = min(self.min_time, duration)
        self.max_time = max(self.max_time, duration)
        self.recent_times.append(duration)

    @property
    def avg_time(self) -> float:
        """Get the average time for this metric."""
        return self.total_time / self.count if self.count > 0 else 0.0

    @property
    def p95_time(self) -> float:
        """Get the 95th percentile time for recent measurements."""
        if len(self.recent_times) < 5:
            return self.max_time
        return statistics.quantiles(self.recent_times, n=20)[-1]

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for serialization."""
        return {
            "count": self.count,
            "total_time": self.total_time,
            "min_time": self.min_time if self.min_time != float("inf") else 0.0,
            "max_time": self.max_time,
            "avg_time": self.avg_time,
            "p95_time": self.p95_time,
        }


@dataclass
class CounterMetric:
    """Counter metric for tracking amounts of work."""

    count: int = 0

    def increment(self, amount: int = 1) -> None:
        """Increment this counter."""
        self.count += amount


class MetricsCollector:
    """Thread-safe registry of time metrics and counters."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._timings: dict[str, TimeMetric] = defaultdict(TimeMetric)
        self._counters: dict[str, CounterMetric] = defaultdict(CounterMetric)
        self._started = time.perf_counter()

    def record_time(self, name: str, duration: float) -> None:
        """Record one duration (seconds) for an operation."""
        with self._lock:
            self._timings[name].add(duration)

    def increment(self, name: str, amount: int = 1) -> None:
        """Increment a named counter."""
        with self._lock:
            self._counters[name].increment(amount)

    def snapshot(self) -> dict[str, Any]:
        """Return a serializable view of all metrics."""
        with self._lock:
            result: dict[str, Any] = {
                "uptime_s": time.perf_counter() - self._started,
                "timings": {k: v.to_dict() for k, v in self._timings.items()},
                "counters": {k: v.count for k, v in self._counters.items()},
            }
        if psutil is not None:
            result["rss_mb"] = psutil.Process().memory_info().rss / 2**20
        return result

    def reset(self) -> None:
        """Drop all recorded metrics."""
        with self._lock:
            self._timings.clear()
            self._counters.clear()
            self._started = time.perf_counter()


_metrics: MetricsCollector | None = None
_metrics_lock = threading.Lock()


def get_metrics() -> MetricsCollector:
    """Get the global metrics collector."""
    global _metrics
    with _metrics_lock:
        if _metrics is None:
            _metrics = MetricsCollector()
        return _metrics


def record_response_time(name: str, duration: float) -> None:
    """Record how long an operation took."""
    get_metrics().record_time(name, duration)


def record_work(name: str, amount: int = 1) -> None:
    """Count units of work (codes enumerated, symbols simulated)."""
    get_metrics().increment(name, amount)


def log_metrics_snapshot() -> None:
    """Log the current metrics at DEBUG level."""
    snapshot = get_metrics().snapshot()
    logger.debug("Metrics snapshot", extra={"metrics": snapshot})
