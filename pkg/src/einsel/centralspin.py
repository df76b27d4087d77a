"""Central-spin pure-dephasing model.

One central qubit (register position 0) couples to N environment qubits
through

    H = 1/2 sigma_z ⊗ sum_i g_i sigma_z^(i)        (hbar = 1)

H is diagonal in the computational basis, so evolution is a per-amplitude
phase and never needs a matrix exponential. With a product initial state
(alpha|0> + beta|1>) ⊗ |E0> the central off-diagonal element is
alpha conj(beta) r(t), where the decoherence factor is

    r(t) = <E-(t)|E+(t)> = prod_i (|a_i|^2 e^{-i g_i t} + |b_i|^2 e^{+i g_i t}).

z-eigenstates of the central spin are the pointer states: their purity never
changes, while every other state moves toward the z axis at constant z.

Example:
    >>> model = random_couplings(12, seed=7)
    >>> env = ProductEnvironment.plus_x(12)
    >>> td = decoherence_time(model, env, epsilon=0.01)
    >>> points = bloch_trajectory(model, PureState.from_bloch_angles(math.pi / 2),
    ...                           env, TimeGrid.linspace(td.time, 50))
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import numpy.typing as npt

from einsel.errors import DimensionError, StateError
from einsel.qcore import (
    BlochVector,
    DensityMatrix,
    PureState,
    bloch_vector,
    partial_trace,
    purity,
    tensor,
)
from einsel.qcore.ops import require_same_register, single_qubit
from einsel.runner import ProgressCallback, SampleRunner

DEFAULT_EPSILON = 0.01
DEFAULT_SEARCH_POINTS = 2000
# search horizon in units of 2*pi / mean coupling, i.e. [0, 4 pi / g_mean]
DEFAULT_SEARCH_PERIODS = 2.0
GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))

FloatArray = npt.NDArray[np.float64]


def spin_signs(num_qubits: int) -> npt.NDArray[np.int8]:
    """Table of s_q = +1 (bit 0) / -1 (bit 1), shape (2**n, n), qubit 0 leading."""
    indices = np.arange(2**num_qubits)[:, None]
    shifts = np.arange(num_qubits - 1, -1, -1)[None, :]
    bits = (indices >> shifts) & 1
    return (1 - 2 * bits).astype(np.int8)


@dataclass(frozen=True, eq=False)
class CentralSpinModel:
    """Couplings g_i of the central spin to each environment qubit.

    Attributes:
        couplings: Read-only coupling vector, one entry per environment qubit.
    """

    couplings: FloatArray

    def __init__(self, couplings: Sequence[float] | FloatArray) -> None:
        """Validate the couplings.

        Args:
            couplings: One finite real coupling per environment qubit.

        Raises:
            ValueError: If there are no couplings or any is not finite.
        """
        values = np.array(couplings, dtype=np.float64, copy=True).reshape(-1)
        if values.size < 1:
            raise ValueError("A central-spin model needs at least one environment qubit")
        if not np.all(np.isfinite(values)):
            raise ValueError("Couplings must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "couplings", values)

    @property
    def num_env(self) -> int:
        """Number of environment qubits N."""
        return int(self.couplings.size)

    @property
    def num_qubits(self) -> int:
        """Register size N + 1, central spin first."""
        return self.num_env + 1

    @property
    def decohering(self) -> bool:
        """False for the null coupling vector, which never decoheres anything."""
        return bool(np.any(self.couplings != 0.0))

    @property
    def mean_coupling(self) -> float:
        """Mean of |g_i|; sets the natural time scale 1/g."""
        return float(np.mean(np.abs(self.couplings)))

    @cached_property
    def env_energies(self) -> FloatArray:
        """sum_i g_i s_i for every environment basis index."""
        energies = spin_signs(self.num_env) @ self.couplings
        energies.setflags(write=False)
        return energies

    @cached_property
    def energies(self) -> FloatArray:
        """Eigenvalue of H for every basis index of the full register."""
        half = 0.5 * self.env_energies
        energies = np.concatenate([half, -half])
        energies.setflags(write=False)
        return energies

    def __repr__(self) -> str:
        """Return a string representation of the model."""
        return f"CentralSpinModel(num_env={self.num_env})"


def random_couplings(num_env: int, seed: int) -> CentralSpinModel:
    """Couplings drawn i.i.d. uniform on (0, 1] from a seeded generator."""
    if num_env < 1:
        raise ValueError("num_env must be at least 1")
    rng = np.random.default_rng(seed)
    return CentralSpinModel(1.0 - rng.random(num_env))


@dataclass(frozen=True)
class ProductEnvironment:
    """Unentangled environment: one (a_i, b_i) pair per qubit.

    a_i = <0|e_i> and b_i = <1|e_i>, with |a_i|^2 + |b_i|^2 = 1.
    """

    spins: tuple[tuple[complex, complex], ...]

    def __post_init__(self) -> None:
        """Check every pair is normalized."""
        if not self.spins:
            raise StateError("Environment needs at least one qubit")
        for position, (a, b) in enumerate(self.spins):
            weight = abs(a) ** 2 + abs(b) ** 2
            if abs(weight - 1.0) > 1e-10:
                raise StateError(
                    f"Environment qubit {position} has norm^2 {weight:.12g}, expected 1"
                )

    @classmethod
    def plus_x(cls, num_env: int) -> ProductEnvironment:
        """Every qubit in |+x> = (|0> + |1>)/sqrt(2)."""
        amplitude = complex(1.0 / math.sqrt(2.0))
        return cls(tuple((amplitude, amplitude) for _ in range(num_env)))

    @classmethod
    def z_product(cls, num_env: int, bits: Sequence[int] | None = None) -> ProductEnvironment:
        """Every qubit in a z eigenstate; all |0> unless bits are given."""
        bits = list(bits) if bits is not None else [0] * num_env
        if len(bits) != num_env or any(b not in (0, 1) for b in bits):
            raise StateError(f"Need {num_env} bits of 0/1, got {bits}")
        return cls(tuple((1 + 0j, 0j) if b == 0 else (0j, 1 + 0j) for b in bits))

    @classmethod
    def from_states(cls, states: Sequence[PureState]) -> ProductEnvironment:
        """Build from single-qubit states."""
        spins = []
        for state in states:
            single_qubit(state, "environment qubit")
            a, b = state.amplitudes
            spins.append((complex(a), complex(b)))
        return cls(tuple(spins))

    @property
    def num_env(self) -> int:
        """Number of environment qubits."""
        return len(self.spins)

    def weights(self) -> tuple[FloatArray, FloatArray]:
        """(|a_i|^2, |b_i|^2) as arrays."""
        pairs = np.array(self.spins, dtype=np.complex128)
        return np.abs(pairs[:, 0]) ** 2, np.abs(pairs[:, 1]) ** 2

    def to_state(self) -> PureState:
        """The environment as a PureState over N qubits."""
        return PureState.product(PureState(np.array(pair)) for pair in self.spins)


Environment = ProductEnvironment | PureState


@dataclass(frozen=True, eq=False)
class TimeGrid:
    """Strictly ascending, finite, non-negative times."""

    times: FloatArray

    def __init__(self, times: Sequence[float] | FloatArray) -> None:
        """Validate the grid.

        Raises:
            ValueError: If empty, negative, non-finite or not strictly ascending.
        """
        values = np.array(times, dtype=np.float64, copy=True).reshape(-1)
        if values.size < 1:
            raise ValueError("Time grid is empty")
        if not np.all(np.isfinite(values)) or np.any(values < 0.0):
            raise ValueError("Times must be finite and non-negative")
        if np.any(np.diff(values) <= 0.0):
            raise ValueError("Times must be strictly ascending")
        values.setflags(write=False)
        object.__setattr__(self, "times", values)

    @classmethod
    def linspace(cls, t_max: float, steps: int) -> TimeGrid:
        """steps evenly spaced times on [0, t_max]; a single step is t = 0."""
        if steps < 1:
            raise ValueError("steps must be at least 1")
        if steps == 1:
            return cls([0.0])
        return cls(np.linspace(0.0, t_max, steps))

    def __len__(self) -> int:
        """Number of grid times."""
        return int(self.times.size)


def hamiltonian_phase(model: CentralSpinModel, basis_index: int) -> float:
    """Energy 1/2 s_0 sum_i g_i s_i of a computational basis state.

    Raises:
        DimensionError: If the index is outside the 2**(N+1) register.
    """
    dim = 2**model.num_qubits
    if not 0 <= basis_index < dim:
        raise DimensionError(f"Basis index {basis_index} outside a {dim}-dim register")
    env_dim = 2**model.num_env
    central_sign = 1.0 if basis_index < env_dim else -1.0
    env_index = basis_index % env_dim
    shifts = np.arange(model.num_env - 1, -1, -1)
    signs = 1.0 - 2.0 * ((env_index >> shifts) & 1)
    return 0.5 * central_sign * float(signs @ model.couplings)


def evolve(model: CentralSpinModel, psi0: PureState, t: float) -> PureState:
    """Apply exp(-iHt) as one phase per amplitude."""
    require_same_register(psi0, model.num_qubits, "initial state")
    return PureState(psi0.amplitudes * np.exp(-1j * model.energies * t))


def decoherence_factors(
    model: CentralSpinModel, env: Environment, times: Sequence[float] | FloatArray
) -> npt.NDArray[np.complex128]:
    """r(t) = <E-(t)|E+(t)> at every requested time.

    Product environments use the closed-form product; general environment
    states use sum_k |psi_k|^2 exp(-i e_k t) over environment basis energies.
    """
    times = np.asarray(times, dtype=np.float64).reshape(-1)
    if isinstance(env, ProductEnvironment):
        if env.num_env != model.num_env:
            raise DimensionError(
                f"Environment has {env.num_env} qubits, model has {model.num_env}"
            )
        weight_a, weight_b = env.weights()
        phases = np.outer(times, model.couplings)
        factors = weight_a * np.exp(-1j * phases) + weight_b * np.exp(1j * phases)
        return np.prod(factors, axis=1)

    require_same_register(env, model.num_env, "environment state")
    probabilities = np.abs(env.amplitudes) ** 2
    return np.exp(-1j * np.outer(times, model.env_energies)) @ probabilities


def decoherence_factor(model: CentralSpinModel, env: ProductEnvironment, t: float) -> complex:
    """Closed-form r(t) for a product environment; r(0) = 1 exactly."""
    if not isinstance(env, ProductEnvironment):
        raise TypeError("decoherence_factor needs a ProductEnvironment")
    if t == 0.0:
        if env.num_env != model.num_env:
            raise DimensionError(
                f"Environment has {env.num_env} qubits, model has {model.num_env}"
            )
        return 1.0 + 0.0j
    return complex(decoherence_factors(model, env, [t])[0])


def decoherence_factor_from_state(
    model: CentralSpinModel, env_state: PureState, t: float
) -> complex:
    """r(t) for an arbitrary (possibly entangled) environment state."""
    return complex(decoherence_factors(model, env_state, [t])[0])


def central_state(model: CentralSpinModel, psi_t: PureState) -> DensityMatrix:
    """Reduced 2x2 state of the central spin."""
    require_same_register(psi_t, model.num_qubits, "evolved state")
    return partial_trace(psi_t, [0])


def initial_state(central: PureState, env: Environment) -> PureState:
    """central ⊗ |E0>; both branches share the same environment state."""
    single_qubit(central, "central state")
    env_state = env.to_state() if isinstance(env, ProductEnvironment) else env
    return tensor(central, env_state)


@dataclass(frozen=True)
class TrajectoryPoint:
    """Central-spin snapshot at one grid time.

    Attributes:
        t: Time.
        bloch: Bloch vector of the reduced central state.
        purity: Tr(rho^2) of the reduced central state.
        factor: Decoherence factor r(t).
    """

    t: float
    bloch: BlochVector
    purity: float
    factor: complex


def bloch_trajectory(
    model: CentralSpinModel,
    central: PureState,
    env: Environment,
    grid: TimeGrid,
    max_workers: int = 1,
    progress: ProgressCallback | None = None,
) -> list[TrajectoryPoint]:
    """Evolve, reduce and convert at every grid time.

    Time points are independent, so they may run concurrently; the result is
    the same as a sequential evaluation.
    """
    psi0 = initial_state(central, env)
    require_same_register(psi0, model.num_qubits, "initial state")
    factors = decoherence_factors(model, env, grid.times)

    def point(index: int) -> TrajectoryPoint:
        t = float(grid.times[index])
        rho = central_state(model, evolve(model, psi0, t))
        factor = 1.0 + 0.0j if t == 0.0 else complex(factors[index])
        return TrajectoryPoint(t=t, bloch=bloch_vector(rho), purity=purity(rho), factor=factor)

    return SampleRunner(max_workers).map(point, range(len(grid)), progress=progress)


@dataclass(frozen=True)
class DecoherenceTime:
    """Outcome of a decoherence-time search.

    Attributes:
        time: Smallest grid time with |r| <= epsilon; inf if none qualifies.
        decohered: False when no grid point reached the threshold.
        epsilon: Threshold used.
        max_abs_r_after: Largest |r| on the grid at or after ``time``
            (over the whole grid when not decohered); reports revivals.
        horizon: Last time searched.
    """

    time: float
    decohered: bool
    epsilon: float
    max_abs_r_after: float
    horizon: float


def decoherence_search_grid(
    model: CentralSpinModel,
    points: int = DEFAULT_SEARCH_POINTS,
    periods: float = DEFAULT_SEARCH_PERIODS,
) -> TimeGrid:
    """Uniform grid on [0, periods * 2 pi / mean |g|]; default [0, 4 pi / g]."""
    if points < 2:
        raise ValueError("The search grid needs at least two points")
    if not model.decohering:
        raise ValueError("A null-coupling model has no decoherence time scale")
    return TimeGrid.linspace(periods * 2.0 * math.pi / model.mean_coupling, points)


def decoherence_time(
    model: CentralSpinModel,
    env: Environment,
    epsilon: float = DEFAULT_EPSILON,
    grid: TimeGrid | None = None,
) -> DecoherenceTime:
    """Smallest grid time at which |r(t)| <= epsilon.

    Raises:
        ValueError: If epsilon is not in (0, 1).
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")

    if not model.decohering:
        return DecoherenceTime(
            time=math.inf, decohered=False, epsilon=epsilon, max_abs_r_after=1.0, horizon=0.0
        )

    if grid is None:
        grid = decoherence_search_grid(model)
    magnitudes = np.abs(decoherence_factors(model, env, grid.times))
    magnitudes[grid.times == 0.0] = 1.0
    hits = np.flatnonzero(magnitudes <= epsilon)
    horizon = float(grid.times[-1])

    if hits.size == 0:
        return DecoherenceTime(
            time=math.inf,
            decohered=False,
            epsilon=epsilon,
            max_abs_r_after=float(np.max(magnitudes)),
            horizon=horizon,
        )

    first = int(hits[0])
    return DecoherenceTime(
        time=float(grid.times[first]),
        decohered=True,
        epsilon=epsilon,
        max_abs_r_after=float(np.max(magnitudes[first:])),
        horizon=horizon,
    )


def predicted_purity(theta: float, abs_r: float) -> float:
    """Central purity 1 - sin^2(theta) (1 - |r|^2) / 2 for polar angle theta.

    Purity loss grows with the angle from the z axis; the poles lose nothing.
    """
    return 1.0 - 0.5 * math.sin(theta) ** 2 * (1.0 - abs_r**2)


def sphere_grid(count: int) -> list[tuple[float, float]]:
    """count (theta, phi) pairs from pole to pole, phi advancing by the golden angle."""
    if count < 1:
        raise ValueError("count must be at least 1")
    if count == 1:
        return [(0.0, 0.0)]
    thetas = np.linspace(0.0, math.pi, count)
    return [
        (float(theta), float((k * GOLDEN_ANGLE) % (2.0 * math.pi)))
        for k, theta in enumerate(thetas)
    ]


@dataclass(frozen=True)
class TrajectorySummary:
    """Per-initial-state digest of a trajectory."""

    theta: float
    phi: float
    z_drift: float
    initial_xy: float
    final_xy: float
    final_purity: float
    predicted_final_purity: float
    points: list[TrajectoryPoint] = field(repr=False, compare=False)

    @property
    def is_pointer_state(self) -> bool:
        """True at the poles, where the state is a z eigenstate."""
        return math.isclose(math.sin(self.theta), 0.0, abs_tol=1e-12)


def summarize_trajectory(
    theta: float, phi: float, points: list[TrajectoryPoint]
) -> TrajectorySummary:
    """Reduce a trajectory to z drift, transverse shrinkage and purity."""
    z0 = points[0].bloch.z
    final = points[-1]
    return TrajectorySummary(
        theta=theta,
        phi=phi,
        z_drift=max(abs(p.bloch.z - z0) for p in points),
        initial_xy=points[0].bloch.transverse,
        final_xy=final.bloch.transverse,
        final_purity=final.purity,
        predicted_final_purity=predicted_purity(theta, abs(final.factor)),
        points=points,
    )


def einselection_sweep(
    model: CentralSpinModel,
    env: Environment,
    grid: TimeGrid,
    count: int = 9,
    max_workers: int = 1,
    progress: ProgressCallback | None = None,
) -> list[TrajectorySummary]:
    """Trajectories for a grid of initial central states covering the sphere.

    ``progress`` is called with the number of finished initial states.
    """
    summaries = []
    for done, (theta, phi) in enumerate(sphere_grid(count), start=1):
        central = PureState.from_bloch_angles(theta, phi)
        points = bloch_trajectory(model, central, env, grid, max_workers=max_workers)
        summaries.append(summarize_trajectory(theta, phi, points))
        if progress:
            progress(done)
    return summaries
