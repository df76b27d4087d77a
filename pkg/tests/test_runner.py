"""Tests for the sample runner and collector."""

from __future__ import annotations

import threading
import time

import numpy as np
import pytest

from einsel.metrics import SampleCollector, SampleStatistics
from einsel.runner import SampleRunner


class TestSampleRunner:
    """Tests for SampleRunner."""

    def test_sequential_map(self) -> None:
        """Test inline execution keeps index order."""
        assert SampleRunner().map(lambda i: i * i, range(5)) == [0, 1, 4, 9, 16]

    def test_threaded_map_keeps_order(self) -> None:
        """Test results come back in index order even when units finish out of order."""

        def work(index: int) -> int:
            time.sleep(0.001 * (5 - index))
            return index

        assert SampleRunner(max_workers=4).map(work, range(6)) == list(range(6))

    def test_uses_threads(self) -> None:
        """Test more than one thread evaluates work when allowed."""
        seen: set[int] = set()
        barrier = threading.Barrier(2, timeout=5)

        def work(index: int) -> int:
            seen.add(threading.get_ident())
            barrier.wait()
            return index

        SampleRunner(max_workers=2).map(work, range(2))
        assert len(seen) == 2

    @pytest.mark.parametrize("workers", [1, 3])
    def test_progress_counts(self, workers: int) -> None:
        """Test progress is called once per finished unit."""
        seen: list[int] = []
        SampleRunner(max_workers=workers).map(lambda i: i, range(4), progress=seen.append)
        assert seen == [1, 2, 3, 4]

    def test_empty_indices(self) -> None:
        """Test an empty range produces no results."""
        assert SampleRunner(max_workers=2).map(lambda i: i, []) == []

    def test_exceptions_propagate(self) -> None:
        """Test a failing unit raises from map."""

        def work(index: int) -> int:
            if index == 2:
                raise ValueError("boom")
            return index

        with pytest.raises(ValueError, match="boom"):
            SampleRunner(max_workers=3).map(work, range(4))

    def test_invalid_workers(self) -> None:
        """Test max_workers must be positive."""
        with pytest.raises(ValueError):
            SampleRunner(max_workers=0)

    def test_repr(self) -> None:
        """Test the string representation."""
        assert repr(SampleRunner(3)) == "SampleRunner(max_workers=3)"


class TestSampleCollector:
    """Tests for SampleCollector."""

    def test_values_sorted_by_index(self) -> None:
        """Test values come back in sample-index order."""
        collector = SampleCollector()
        for index, value in [(2, 0.3), (0, 0.1), (1, 0.2)]:
            collector.record("d", index, value)
        np.testing.assert_array_equal(collector.values("d"), [0.1, 0.2, 0.3])
        assert len(collector.values("d")) == 3

    def test_statistics(self) -> None:
        """Test mean, standard error and extremes."""
        collector = SampleCollector()
        for index, value in enumerate([1.0, 2.0, 3.0, 4.0]):
            collector.record("x", index, value)
        stats = collector.statistics("x")
        assert isinstance(stats, SampleStatistics)
        assert (stats.count, stats.mean, stats.minimum, stats.maximum) == (4, 2.5, 1.0, 4.0)
        assert stats.std_error == pytest.approx(np.std([1, 2, 3, 4], ddof=1) / 2)

    def test_single_sample_has_zero_error(self) -> None:
        """Test one sample gives a zero standard error."""
        collector = SampleCollector()
        collector.record("x", 0, 0.5)
        assert collector.statistics("x").std_error == 0.0

    def test_missing_series(self) -> None:
        """Test statistics of an unknown series raise KeyError."""
        with pytest.raises(KeyError):
            SampleCollector().statistics("nothing")

    def test_order_independent(self) -> None:
        """Test recording order does not change the statistics bit for bit."""
        values = np.random.default_rng(3).random(50)
        forward, backward = SampleCollector(), SampleCollector()
        for index in range(50):
            forward.record("d", index, values[index])
        for index in reversed(range(50)):
            backward.record("d", index, values[index])
        assert forward.statistics("d") == backward.statistics("d")

    def test_overwrite_same_index(self) -> None:
        """Test recording an index twice keeps the last value."""
        collector = SampleCollector()
        collector.record("d", 0, 1.0)
        collector.record("d", 0, 2.0)
        assert len(collector.values("d")) == 1
        assert collector.values("d")[0] == 2.0

    def test_concurrent_records(self) -> None:
        """Test records from many threads are all kept."""
        collector = SampleCollector()
        SampleRunner(max_workers=8).map(
            lambda i: collector.record("d", i, float(i)), range(200)
        )
        assert len(collector.values("d")) == 200
        assert collector.statistics("d").mean == pytest.approx(99.5)
