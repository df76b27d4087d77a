"""Sample collection module.

This module provides the SampleCollector class for gathering per-sample
values during Monte Carlo runs and reducing them to summary statistics.
"""

from __future__ import annotations

import math
import threading
from collections import defaultdict
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt


@dataclass(frozen=True)
class SampleStatistics:
    """Summary of one named series.

    Attributes:
        count: Number of samples.
        mean: Sample mean.
        std_error: Sample standard deviation (ddof=1) over sqrt(count);
            0 for a single sample.
        minimum: Smallest value.
        maximum: Largest value.
    """

    count: int
    mean: float
    std_error: float
    minimum: float
    maximum: float


class SampleCollector:
    """Collector for per-sample values.

    Workers may record in any order and from any thread; every reduction
    first sorts by sample index, so statistics are bit-identical to a
    sequential run.

    Example:
        >>> collector = SampleCollector()
        >>> collector.record("distance", 1, 0.02)
        >>> collector.record("distance", 0, 0.03)
        >>> collector.values("distance")
        array([0.03, 0.02])
    """

    def __init__(self) -> None:
        """Initialize the collector."""
        self._lock = threading.Lock()
        self._series: dict[str, dict[int, float]] = defaultdict(dict)

    def record(self, name: str, index: int, value: float) -> None:
        """Record one sample value.

        Args:
            name: Series name.
            index: Sample index; recording the same index twice overwrites.
            value: The value.
        """
        with self._lock:
            self._series[name][index] = float(value)

    def values(self, name: str) -> npt.NDArray[np.float64]:
        """Values of a series ordered by sample index."""
        with self._lock:
            series = dict(self._series.get(name, {}))
        return np.array([series[i] for i in sorted(series)], dtype=np.float64)

    def statistics(self, name: str) -> SampleStatistics:
        """Reduce a series to mean, standard error and extremes.

        Raises:
            KeyError: If nothing was recorded under name.
        """
        values = self.values(name)
        if values.size == 0:
            raise KeyError(f"No samples recorded for '{name}'")

        count = int(values.size)
        mean = float(np.mean(values))
        std_error = float(np.std(values, ddof=1)) / math.sqrt(count) if count > 1 else 0.0
        return SampleStatistics(
            count=count,
            mean=mean,
            std_error=std_error,
            minimum=float(np.min(values)),
            maximum=float(np.max(values)),
        )
