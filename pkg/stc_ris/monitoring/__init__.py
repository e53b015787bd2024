"""
Performance monitoring for stc-ris.

Utilities for tracking operation timings and simulated work.
"""

from .metrics import (
    MetricsCollector,
    get_metrics,
    log_metrics_snapshot,
    record_response_time,
    record_work,
)

__all__ = [
    "MetricsCollector",
    "get_metrics",
    "log_metrics_snapshot",
    "record_response_time",
    "record_work",
]
