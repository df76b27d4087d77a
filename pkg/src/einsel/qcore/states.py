"""Immutable multi-qubit state types.

Bit ordering: qubit 0 is the most significant bit of an amplitude index.
In every register built by this package the central spin is qubit 0.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt
from scipy import linalg

from einsel.errors import DimensionError, StateError, SubsystemError

RESCALE_LIMIT = 1e-6
HERMITIAN_TOLERANCE = 1e-10
TRACE_TOLERANCE = 1e-10
EIGENVALUE_FLOOR = -1e-9

ComplexArray = npt.NDArray[np.complex128]


def _frozen(array: npt.ArrayLike, dtype: type = np.complex128) -> npt.NDArray:
    """Copy into a read-only array."""
    out = np.array(array, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


def num_qubits_for(dim: int) -> int:
    """Return n for a dimension 2**n, or raise."""
    if dim < 2 or dim & (dim - 1):
        raise DimensionError(f"Dimension {dim} is not a power of two >= 2")
    return dim.bit_length() - 1


@dataclass(frozen=True, eq=False)
class PureState:
    """A normalized amplitude vector over a register of qubits.

    Raw vectors whose norm is off by at most 1e-6 are rescaled to unit norm;
    anything further off is rejected, since it almost always means the caller
    built the vector wrong.

    Attributes:
        amplitudes: Read-only complex vector of length 2**num_qubits.
        num_qubits: Register size.

    Example:
        >>> plus = PureState(np.array([1, 1]) / np.sqrt(2))
        >>> plus.num_qubits
        1
    """

    amplitudes: ComplexArray
    num_qubits: int = field(init=False)

    def __init__(self, amplitudes: npt.ArrayLike) -> None:
        """Validate and normalize the amplitudes.

        Args:
            amplitudes: Complex vector of length 2**n.

        Raises:
            StateError: If the vector is not 1-D, has non-finite entries, or
                its norm deviates from 1 by more than 1e-6.
            DimensionError: If the length is not a power of two.
        """
        vector = np.asarray(amplitudes, dtype=np.complex128)
        if vector.ndim != 1:
            raise StateError(f"Amplitudes must be a vector, got shape {vector.shape}")
        n = num_qubits_for(vector.shape[0])
        if not np.all(np.isfinite(vector)):
            raise StateError("Amplitudes contain NaN or infinite values")

        norm = float(np.linalg.norm(vector))
        if abs(norm - 1.0) > RESCALE_LIMIT:
            raise StateError(
                f"State norm is {norm:.12g}, expected 1",
                suggestion="Normalize the vector yourself, or use PureState.normalized().",
            )
        if norm != 1.0:
            vector = vector / norm

        object.__setattr__(self, "amplitudes", _frozen(vector))
        object.__setattr__(self, "num_qubits", n)

    @classmethod
    def normalized(cls, amplitudes: npt.ArrayLike) -> PureState:
        """Build a state from an unnormalized, nonzero vector."""
        vector = np.asarray(amplitudes, dtype=np.complex128)
        norm = float(np.linalg.norm(vector))
        if norm == 0.0 or not math.isfinite(norm):
            raise StateError("Cannot normalize a zero or non-finite vector")
        return cls(vector / norm)

    @classmethod
    def basis(cls, num_qubits: int, index: int = 0) -> PureState:
        """Computational basis state |index> on num_qubits qubits."""
        dim = 2**num_qubits
        if not 0 <= index < dim:
            raise StateError(f"Basis index {index} out of range for {num_qubits} qubits")
        vector = np.zeros(dim, dtype=np.complex128)
        vector[index] = 1.0
        return cls(vector)

    @classmethod
    def from_bloch_angles(cls, theta: float, phi: float = 0.0) -> PureState:
        """Single-qubit state cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>."""
        return cls([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])

    @classmethod
    def product(cls, factors: Iterable[PureState]) -> PureState:
        """Tensor product of the given states, first factor most significant."""
        vector = np.ones(1, dtype=np.complex128)
        for factor in factors:
            vector = np.kron(vector, factor.amplitudes)
        if vector.shape[0] < 2:
            raise StateError("A product needs at least one factor")
        return cls(vector)

    @property
    def dim(self) -> int:
        """Hilbert-space dimension."""
        return int(self.amplitudes.shape[0])

    def norm(self) -> float:
        """Euclidean norm of the amplitudes."""
        return float(np.linalg.norm(self.amplitudes))

    def __repr__(self) -> str:
        """Return a string representation of the state."""
        return f"PureState(num_qubits={self.num_qubits})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A Hermitian, positive-semidefinite, unit-trace matrix.

    Eigenvalues in [-1e-9, 0) are tolerated as eigensolver noise; anything
    more negative is rejected.
    """

    entries: ComplexArray
    dim: int = field(init=False)

    def __init__(self, entries: npt.ArrayLike, check: bool = True) -> None:
        """Validate the matrix.

        Args:
            entries: Square complex matrix.
            check: Run the Hermitian, trace and PSD checks.

        Raises:
            StateError: If any invariant is violated.
        """
        matrix = np.asarray(entries, dtype=np.complex128)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise StateError(f"Density matrix must be square, got shape {matrix.shape}")
        if matrix.shape[0] < 2:
            raise StateError("Density matrix dimension must be at least 2")

        if check:
            _check_density(matrix)

        object.__setattr__(self, "entries", _frozen(matrix))
        object.__setattr__(self, "dim", int(matrix.shape[0]))

    @property
    def num_qubits(self) -> int:
        """Number of qubits, for power-of-two dimensions."""
        return num_qubits_for(self.dim)

    def eigenvalues(self) -> npt.NDArray[np.float64]:
        """Ascending eigenvalues with solver noise below zero clamped."""
        values = linalg.eigvalsh(self.entries)
        return np.where(values < 0.0, 0.0, values)

    def trace(self) -> float:
        """Real part of the trace."""
        return float(np.real(np.trace(self.entries)))

    def __repr__(self) -> str:
        """Return a string representation of the matrix."""
        return f"DensityMatrix(dim={self.dim})"


def _check_density(matrix: ComplexArray) -> None:
    hermitian_error = float(np.max(np.abs(matrix - matrix.conj().T)))
    if hermitian_error > HERMITIAN_TOLERANCE:
        raise StateError(f"Matrix is not Hermitian (max deviation {hermitian_error:.3g})")

    trace = complex(np.trace(matrix))
    if abs(trace - 1.0) > TRACE_TOLERANCE:
        raise StateError(f"Trace is {trace.real:.12g}, expected 1")

    smallest = float(linalg.eigvalsh(matrix)[0])
    if smallest < EIGENVALUE_FLOOR:
        raise StateError(f"Matrix has negative eigenvalue {smallest:.3g}")


@dataclass(frozen=True)
class BlochVector:
    """Bloch-ball coordinates of a single-qubit density matrix.

    Attributes:
        x: Coefficient of Pauli X.
        y: Coefficient of Pauli Y.
        z: Coefficient of Pauli Z; +1 is |0>, the +z pointer state.
    """

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        """Reject points outside the unit ball."""
        values = (self.x, self.y, self.z)
        if not all(math.isfinite(v) for v in values):
            raise StateError("Bloch vector components must be finite")
        if self.x**2 + self.y**2 + self.z**2 > 1.0 + 1e-9:
            raise StateError(f"Bloch vector {values} lies outside the unit ball")

    @property
    def length(self) -> float:
        """Distance from the centre; 1 for pure states."""
        return math.sqrt(self.x**2 + self.y**2 + self.z**2)

    @property
    def transverse(self) -> float:
        """Squared distance from the z axis, x**2 + y**2."""
        return self.x**2 + self.y**2

    def as_tuple(self) -> tuple[float, float, float]:
        """Return (x, y, z)."""
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class QubitSubset:
    """Sorted, distinct qubit positions within a register.

    Attributes:
        indices: Ascending qubit positions.
    """

    indices: tuple[int, ...]

    def __init__(self, indices: Iterable[int]) -> None:
        """Validate the positions.

        Args:
            indices: Qubit positions; must already be sorted and distinct.

        Raises:
            SubsystemError: If empty, unsorted, duplicated or negative.
        """
        values = tuple(int(i) for i in indices)
        if not values:
            raise SubsystemError("Qubit subset is empty")
        if any(i < 0 for i in values):
            raise SubsystemError(f"Qubit subset {values} has negative positions")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise SubsystemError(f"Qubit subset {values} must be sorted and distinct")
        object.__setattr__(self, "indices", values)

    def __len__(self) -> int:
        """Number of qubits in the subset."""
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        """Iterate over the positions."""
        return iter(self.indices)

    def check_within(self, num_qubits: int) -> None:
        """Raise unless every position is inside a num_qubits register."""
        if self.indices[-1] >= num_qubits:
            raise SubsystemError(
                f"Qubit subset {self.indices} does not fit a {num_qubits}-qubit register"
            )

    def complement(self, num_qubits: int) -> tuple[int, ...]:
        """Positions of a num_qubits register not in this subset."""
        self.check_within(num_qubits)
        kept = set(self.indices)
        return tuple(i for i in range(num_qubits) if i not in kept)

    def shifted(self, offset: int) -> QubitSubset:
        """The same subset with every position moved by offset."""
        return QubitSubset(i + offset for i in self.indices)


def as_subset(indices: QubitSubset | Sequence[int]) -> QubitSubset:
    """Accept either a QubitSubset or a plain sequence of positions."""
    return indices if isinstance(indices, QubitSubset) else QubitSubset(indices)
