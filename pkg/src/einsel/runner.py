"""Work execution engine module.

This module provides the SampleRunner class for evaluating independent
units of work (Monte Carlo samples, time-grid points) with bounded
concurrency and a deterministic result order.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

T = TypeVar("T")

ProgressCallback = Callable[[int], None]


class SampleRunner:
    """Execution engine for independent units of work.

    Each unit is identified by an integer index and must not depend on any
    other unit. Results always come back in index order, so the output of a
    parallel run is identical to a sequential one. numpy releases the GIL in
    its kernels, which is what makes threads worthwhile here.

    Attributes:
        max_workers: Maximum number of concurrent evaluations; 1 runs inline.

    Example:
        >>> runner = SampleRunner(max_workers=4)
        >>> runner.map(lambda i: i * i, range(5))
        [0, 1, 4, 9, 16]
    """

    def __init__(self, max_workers: int = 1) -> None:
        """Initialize the SampleRunner.

        Args:
            max_workers: Maximum concurrent evaluations. Must be positive.

        Raises:
            ValueError: If max_workers is not positive.
        """
        if max_workers < 1:
            raise ValueError("max_workers must be positive")
        self.max_workers = max_workers

    def map(
        self,
        work: Callable[[int], T],
        indices: Sequence[int] | range,
        progress: ProgressCallback | None = None,
    ) -> list[T]:
        """Evaluate work(i) for every index.

        Args:
            work: Function of the unit index.
            indices: Indices to evaluate.
            progress: Called with the number of units finished so far.

        Returns:
            Results in the order of ``indices``.
        """
        indices = list(indices)

        if self.max_workers == 1 or len(indices) < 2:
            results = []
            for done, index in enumerate(indices, start=1):
                results.append(work(index))
                if progress:
                    progress(done)
            return results

        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            futures = [pool.submit(work, index) for index in indices]
            results = []
            for done, future in enumerate(futures, start=1):
                results.append(future.result())
                if progress:
                    progress(done)
        return results

    def __repr__(self) -> str:
        """Return a string representation of the runner."""
        return f"SampleRunner(max_workers={self.max_workers})"
