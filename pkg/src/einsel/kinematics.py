"""Typicality of environment subsystems.

A Haar-random pure state of n qubits has small subsystems that are already
close to maximally mixed, with no dynamics involved. This module samples
such states, measures the trace distance of a k-qubit subsystem from I/2^k,
compares the average against

    <D(rho_e1, I/d_e1)> <= (d_e1 / 2) sqrt(1 / d_rest)

and checks that the central-spin interaction does not move it.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np

from einsel.centralspin import CentralSpinModel, ProductEnvironment, TimeGrid, evolve
from einsel.errors import DimensionError, SubsystemError
from einsel.metrics.collector import SampleCollector, SampleStatistics
from einsel.qcore import (
    DensityMatrix,
    PureState,
    QubitSubset,
    maximally_mixed,
    partial_trace,
    tensor,
    trace_distance,
    von_neumann_entropy,
)
from einsel.qcore.ops import single_qubit
from einsel.qcore.states import as_subset
from einsel.runner import ProgressCallback, SampleRunner

BOUND_SIGMAS = 3.0

EnvironmentKind = Literal["haar", "plus_x_product", "z_product"]


class HaarSampler:
    """Counter-based stream of Haar-random pure states.

    Sample ``k`` of a seed comes from its own generator,
    ``default_rng(SeedSequence(seed, spawn_key=(k,)))``, so a state depends
    only on (seed, k) and never on which thread drew it or in what order.

    Attributes:
        num_qubits: Register size n; the dimension is 2**n.
        seed: Non-negative integer seed.
        counter: Index of the next sample ``sample()`` returns.

    Example:
        >>> sampler = HaarSampler(num_qubits=10, seed=2024)
        >>> psi = sampler.sample()
        >>> sampler.counter
        1
    """

    def __init__(self, num_qubits: int, seed: int, counter: int = 0) -> None:
        """Initialize the sampler.

        Args:
            num_qubits: Register size, at least 1.
            seed: Non-negative integer seed.
            counter: Starting sample index.

        Raises:
            ValueError: If any argument is out of range.
        """
        if num_qubits < 1:
            raise ValueError("num_qubits must be at least 1")
        if seed < 0:
            raise ValueError("seed must be non-negative")
        if counter < 0:
            raise ValueError("counter must be non-negative")
        self.num_qubits = num_qubits
        self.seed = seed
        self.counter = counter

    @property
    def dim(self) -> int:
        """Hilbert-space dimension 2**n."""
        return 2**self.num_qubits

    def state_at(self, index: int) -> PureState:
        """The index-th state of this seed; does not touch the counter."""
        rng = np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=(index,)))
        real = rng.standard_normal(self.dim)
        imag = rng.standard_normal(self.dim)
        return PureState.normalized(real + 1j * imag)

    def sample(self) -> PureState:
        """Next state of the stream."""
        state = self.state_at(self.counter)
        self.counter += 1
        return state

    def advance(self, count: int) -> int:
        """Reserve count consecutive indices; returns the first one."""
        start = self.counter
        self.counter += count
        return start

    def __repr__(self) -> str:
        """Return a string representation of the sampler."""
        return (
            f"HaarSampler(num_qubits={self.num_qubits}, seed={self.seed}, "
            f"counter={self.counter})"
        )


def sample_haar(sampler: HaarSampler) -> PureState:
    """Draw the next Haar-random state and advance the sampler."""
    return sampler.sample()


@dataclass(frozen=True)
class SubsystemSplit:
    """A k-qubit subsystem of an n-qubit register and its complement.

    Attributes:
        num_qubits: Register size n.
        subsystem: The k kept qubits, 1 <= k < n.
    """

    num_qubits: int
    subsystem: QubitSubset

    def __init__(self, num_qubits: int, subsystem: QubitSubset | Sequence[int]) -> None:
        """Validate the split.

        Raises:
            SubsystemError: If the subset does not fit or leaves nothing traced out.
        """
        subset = as_subset(subsystem)
        subset.check_within(num_qubits)
        if len(subset) >= num_qubits:
            raise SubsystemError(
                f"Subsystem {subset.indices} leaves nothing to trace out of {num_qubits} qubits"
            )
        object.__setattr__(self, "num_qubits", num_qubits)
        object.__setattr__(self, "subsystem", subset)

    @property
    def k(self) -> int:
        """Number of kept qubits."""
        return len(self.subsystem)

    @property
    def d_subsystem(self) -> int:
        """Dimension 2**k of the kept subsystem."""
        return 2**self.k

    @property
    def d_complement(self) -> int:
        """Dimension 2**(n-k) of the rest of the register."""
        return 2 ** (self.num_qubits - self.k)

    def environment_view(self) -> SubsystemSplit:
        """The same qubits seen from the environment register of a central-spin system.

        Full-register position p (p >= 1) becomes environment position p - 1.

        Raises:
            SubsystemError: If the subset contains the central spin (position 0).
        """
        if self.subsystem.indices[0] == 0:
            raise SubsystemError(
                "Position 0 is the central spin, not an environment subsystem",
                suggestion="Environment qubits occupy positions 1..N of the full register.",
            )
        return SubsystemSplit(self.num_qubits - 1, self.subsystem.shifted(-1))


def subsystem_state(psi_env: PureState, split: SubsystemSplit) -> DensityMatrix:
    """Reduced state of the split's subsystem."""
    if psi_env.num_qubits != split.num_qubits:
        raise DimensionError(
            f"State has {psi_env.num_qubits} qubits, split expects {split.num_qubits}"
        )
    return partial_trace(psi_env, split.subsystem)


def bound(split: SubsystemSplit) -> float:
    """Upper bound (d_e1 / 2) sqrt(1 / d_rest) on the mean distance from I/d_e1."""
    return (split.d_subsystem / 2.0) * math.sqrt(1.0 / split.d_complement)


def page_mean_entropy(d_a: int, d_b: int) -> float:
    """Exact Haar average of the entanglement entropy, in bits.

    For m = min(d_a, d_b) and n = max(d_a, d_b):
    S = sum_{j=n+1}^{mn} 1/j - (m - 1) / (2n), converted from nats.
    """
    m, n = sorted((d_a, d_b))
    if m < 1:
        raise ValueError("Dimensions must be positive")
    harmonic = float(np.sum(1.0 / np.arange(n + 1, m * n + 1, dtype=np.float64)))
    return (harmonic - (m - 1) / (2.0 * n)) / math.log(2.0)


@dataclass(frozen=True)
class DistanceStats:
    """Monte Carlo estimate of the mean distance from maximal mixedness.

    Attributes:
        sample_count: Number of environment states averaged.
        mean: Mean trace distance.
        std_error: Standard error of the mean.
        max: Largest observed distance.
        bound_value: Right-hand side of the typicality bound.
        mean_entropy: Mean von Neumann entropy of the subsystem, in bits.
    """

    sample_count: int
    mean: float
    std_error: float
    max: float
    bound_value: float
    mean_entropy: float = 0.0

    def __post_init__(self) -> None:
        """Check the statistic ranges."""
        if self.sample_count < 1:
            raise ValueError("sample_count must be at least 1")
        if not 0.0 <= self.mean <= 1.0:
            raise ValueError(f"mean distance {self.mean} outside [0, 1]")
        if self.std_error < 0.0:
            raise ValueError("std_error must be non-negative")

    @property
    def bound_ratio(self) -> float:
        """mean / bound_value."""
        return self.mean / self.bound_value

    def bound_satisfied(self, sigmas: float = BOUND_SIGMAS) -> bool:
        """mean <= bound_value + sigmas * std_error."""
        return self.mean <= self.bound_value + sigmas * self.std_error

    @classmethod
    def from_statistics(
        cls,
        distances: SampleStatistics,
        bound_value: float,
        entropies: SampleStatistics | None = None,
    ) -> DistanceStats:
        """Build from collector statistics."""
        return cls(
            sample_count=distances.count,
            mean=distances.mean,
            std_error=distances.std_error,
            max=distances.maximum,
            bound_value=bound_value,
            mean_entropy=entropies.mean if entropies else 0.0,
        )


def collect_distances(
    n: int,
    split: SubsystemSplit,
    samples: int,
    sampler: HaarSampler,
    max_workers: int = 1,
    progress: ProgressCallback | None = None,
) -> SampleCollector:
    """Per-sample distances and entropies, keyed by sample index 0..samples-1.

    Series ``distance`` holds D(rho_e1, I/d_e1), ``entropy`` the subsystem
    entropy in bits. Advances the sampler by ``samples``.

    Raises:
        ValueError: If samples < 2.
        DimensionError: If the split or sampler does not describe n qubits.
    """
    if samples < 2:
        raise ValueError("Monte Carlo averages need at least two samples")
    if split.num_qubits != n or sampler.num_qubits != n:
        raise DimensionError(
            f"Split has {split.num_qubits} qubits and sampler {sampler.num_qubits}, expected {n}"
        )

    reference = maximally_mixed(split.d_subsystem)
    start = sampler.advance(samples)
    collector = SampleCollector()

    def work(index: int) -> None:
        rho = subsystem_state(sampler.state_at(start + index), split)
        collector.record("distance", index, trace_distance(rho, reference))
        collector.record("entropy", index, von_neumann_entropy(rho))

    SampleRunner(max_workers).map(work, range(samples), progress=progress)
    return collector


def mc_average_distance(
    n: int,
    split: SubsystemSplit,
    samples: int,
    sampler: HaarSampler,
    max_workers: int = 1,
    progress: ProgressCallback | None = None,
) -> DistanceStats:
    """Mean, standard error and max of D(rho_e1, I/d_e1) over Haar states.

    Deterministic for a given (seed, counter, samples, n, split), whatever
    the worker count.
    """
    collector = collect_distances(n, split, samples, sampler, max_workers, progress)
    return DistanceStats.from_statistics(
        collector.statistics("distance"), bound(split), collector.statistics("entropy")
    )


@dataclass(frozen=True)
class PersistencePoint:
    """Subsystem statistics at one grid time."""

    t: float
    stats: DistanceStats


def _environment_states(
    kind: EnvironmentKind, num_env: int, samples: int, sampler: HaarSampler
) -> tuple[int, Callable[[int], PureState]]:
    if kind == "haar":
        if sampler.num_qubits != num_env:
            raise DimensionError(
                f"Sampler draws {sampler.num_qubits}-qubit states, environment has {num_env}"
            )
        start = sampler.advance(samples)
        return samples, lambda index: sampler.state_at(start + index)

    if kind == "plus_x_product":
        state = ProductEnvironment.plus_x(num_env).to_state()
    elif kind == "z_product":
        state = ProductEnvironment.z_product(num_env).to_state()
    else:
        raise ValueError(f"Unknown environment kind '{kind}'")
    # a product environment is one fixed state
    return 1, lambda index: state


def persistence_experiment(
    model: CentralSpinModel,
    split: SubsystemSplit,
    samples: int,
    grid: TimeGrid,
    sampler: HaarSampler,
    central: PureState | None = None,
    environment: EnvironmentKind = "haar",
    max_workers: int = 1,
    progress: ProgressCallback | None = None,
) -> list[PersistencePoint]:
    """Distance of an environment subsystem from I/d_e1 along the decohering evolution.

    Each environment state is combined with the central state, evolved to every
    grid time and reduced to the chosen environment qubits. Product
    environments are deterministic and contribute a single sample.

    Args:
        model: Central-spin model with N environment qubits.
        split: Subsystem of the full (N+1)-qubit register; position 0 is the
            central spin and may not be included.
        samples: Number of Haar environment states (at least 2).
        grid: Evaluation times.
        sampler: Stream of N-qubit Haar states.
        central: Initial central state; defaults to |+x>.
        environment: "haar", "plus_x_product" or "z_product".
        max_workers: Concurrent samples.
        progress: Called with the number of finished samples.

    Raises:
        SubsystemError: If the split touches the central spin.
        DimensionError: If the split does not match the model register.
    """
    if split.num_qubits != model.num_qubits:
        raise DimensionError(
            f"Split covers {split.num_qubits} qubits, the model register has {model.num_qubits}"
        )
    env_split = split.environment_view()
    if samples < 2:
        raise ValueError("Monte Carlo averages need at least two samples")

    central = single_qubit(central or PureState.from_bloch_angles(math.pi / 2), "central state")
    count, env_state = _environment_states(environment, model.num_env, samples, sampler)
    reference = maximally_mixed(split.d_subsystem)
    collector = SampleCollector()

    def work(index: int) -> None:
        psi0 = tensor(central, env_state(index))
        for step, t in enumerate(grid.times):
            rho = partial_trace(evolve(model, psi0, float(t)), split.subsystem)
            collector.record(f"distance/{step}", index, trace_distance(rho, reference))
            collector.record(f"entropy/{step}", index, von_neumann_entropy(rho))

    SampleRunner(max_workers).map(work, range(count), progress=progress)

    bound_value = bound(env_split)
    return [
        PersistencePoint(
            t=float(t),
            stats=DistanceStats.from_statistics(
                collector.statistics(f"distance/{step}"),
                bound_value,
                collector.statistics(f"entropy/{step}"),
            ),
        )
        for step, t in enumerate(grid.times)
    ]
