"""Ordered, thread-safe aggregation of per-sample results."""

from einsel.metrics.collector import SampleCollector, SampleStatistics

__all__ = ["SampleCollector", "SampleStatistics"]
