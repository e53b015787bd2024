"""Tests for performance metrics collection."""

import logging

import pytest

from stc_ris.monitoring import metrics as metrics_module
from stc_ris.monitoring.metrics import (
    CounterMetric,
    MetricsCollector,
    TimeMetric,
    get_metrics,
    log_metrics_snapshot,
    record_response_time,
    record_work,
)


class TestTimeMetric:
    """Tests for TimeMetric statistics."""

    def test_statistics(self):
        """Test count, average, extremes and the small-sample p95 of a timing metric."""
        metric = TimeMetric()
        for value in (0.1, 0.2, 0.3):
            metric.add(value)
        assert metric.count == 3
        assert metric.avg_time == pytest.approx(0.2)
        assert metric.min_time == 0.1
        assert metric.max_time == 0.3
        # Fewer than five samples: p95 falls back to the maximum.
        assert metric.p95_time == 0.3

    def test_empty_to_dict(self):
        """Test that an empty timing metric reports zeros."""
        data = TimeMetric().to_dict()
        assert data["min_time"] == 0.0
        assert data["avg_time"] == 0.0

    def test_p95_with_many_samples(self):
        """Test the p95 of one hundred evenly spread samples."""
        metric = TimeMetric()
        for i in range(1, 101):
            metric.add(float(i))
        assert 94.0 <= metric.p95_time <= 96.0


class TestCollector:
    """Tests for MetricsCollector and module helpers."""

    def test_counter(self):
        """Test incrementing a counter by one and by a given amount."""
        counter = CounterMetric()
        counter.increment()
        counter.increment(4)
        assert counter.count == 5

    def test_snapshot(self):
        """Test the timings, counters and uptime in a collector snapshot."""
        collector = MetricsCollector()
        collector.record_time("map", 0.5)
        collector.increment("codes_enumerated", 2048)
        snapshot = collector.snapshot()
        assert snapshot["timings"]["map"]["count"] == 1
        assert snapshot["counters"] == {"codes_enumerated": 2048}
        assert snapshot["uptime_s"] >= 0

    def test_reset(self):
        """Test that reset clears all counters."""
        collector = MetricsCollector()
        collector.increment("x")
        collector.reset()
        assert collector.snapshot()["counters"] == {}

    def test_global_helpers(self):
        """Test that the module helpers feed the global collector."""
        record_response_time("run_link", 0.25)
        record_work("symbols_simulated", 1000)
        record_work("symbols_simulated", 500)
        snapshot = get_metrics().snapshot()
        assert snapshot["counters"]["symbols_simulated"] == 1500
        assert snapshot["timings"]["run_link"]["total_time"] == 0.25

    def test_memory_reported_only_with_psutil(self, monkeypatch):
        """Test that RSS is left out when psutil is unavailable."""
        monkeypatch.setattr(metrics_module, "psutil", None)
        assert "rss_mb" not in MetricsCollector().snapshot()

    def test_snapshot_is_logged_at_debug(self, caplog):
        """Test that log_metrics_snapshot emits the snapshot at DEBUG level."""
        record_work("codes_enumerated", 3)
        with caplog.at_level(logging.DEBUG, logger="stc_ris"):
            log_metrics_snapshot()
        record = caplog.records[-1]
        assert record.getMessage() == "Metrics snapshot"
        assert record.metrics["counters"]["codes_enumerated"] == 3
