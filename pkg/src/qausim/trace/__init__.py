"""Trace capture and derived metrics."""
from .metrics import (
    MetricsReport,
    compute_metrics,
    count_drains,
    metrics_from_series,
    settle_index,
)
from .recorder import Trace, TraceRecorder, TraceRow

__all__ = [
    "MetricsReport",
    "compute_metrics",
    "count_drains",
    "metrics_from_series",
    "settle_index",
    "Trace",
    "TraceRecorder",
    "TraceRow",
]
