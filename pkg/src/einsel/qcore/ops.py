"""Composition and reduction of multi-qubit states."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from einsel.errors import DimensionError
from einsel.qcore.states import (
    BlochVector,
    DensityMatrix,
    PureState,
    QubitSubset,
    as_subset,
)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
IDENTITY_2 = np.eye(2, dtype=np.complex128)


def tensor(a: PureState, b: PureState) -> PureState:
    """Tensor product a ⊗ b; the qubits of ``a`` become the leading positions.

    Example:
        >>> tensor(PureState.basis(1, 0), PureState.basis(1, 0)).amplitudes
        array([1.+0.j, 0.+0.j, 0.+0.j, 0.+0.j])
    """
    return PureState(np.kron(a.amplitudes, b.amplitudes))


def projector(state: PureState) -> DensityMatrix:
    """|psi><psi| for a pure state."""
    psi = state.amplitudes
    return DensityMatrix(np.outer(psi, psi.conj()))


def partial_trace(
    state: PureState | DensityMatrix, keep: QubitSubset | Sequence[int]
) -> DensityMatrix:
    """Reduced density matrix on the kept qubits.

    For a pure state the amplitudes are reshaped into a (kept, traced) matrix
    M and the result is M M^dagger, so the full 2^n x 2^n matrix is never
    formed. Kept qubits appear in ascending order in the result.

    Args:
        state: Pure state or density matrix over n qubits.
        keep: Qubit positions to keep.

    Returns:
        Density matrix of dimension 2**len(keep).

    Raises:
        SubsystemError: If keep is empty or does not fit the register.
    """
    subset = as_subset(keep)
    n = state.num_qubits
    subset.check_within(n)
    kept = subset.indices
    traced = subset.complement(n)
    d_keep = 2 ** len(kept)

    if isinstance(state, PureState):
        tensor_form = state.amplitudes.reshape((2,) * n)
        matrix = np.transpose(tensor_form, kept + traced).reshape(d_keep, -1)
        reduced = matrix @ matrix.conj().T
    else:
        rows = kept + traced
        cols = tuple(i + n for i in rows)
        tensor_form = state.entries.reshape((2,) * (2 * n))
        d_traced = 2 ** len(traced)
        blocks = np.transpose(tensor_form, rows + cols).reshape(
            d_keep, d_traced, d_keep, d_traced
        )
        reduced = np.trace(blocks, axis1=1, axis2=3)

    # enforce exact Hermiticity lost to rounding in the contraction
    reduced = 0.5 * (reduced + reduced.conj().T)
    return DensityMatrix(reduced)


def dephase(rho: DensityMatrix) -> DensityMatrix:
    """Drop all coherences in the computational (pointer) basis."""
    return DensityMatrix(np.diag(np.real(np.diag(rho.entries))))


def from_bloch(vector: BlochVector) -> DensityMatrix:
    """Qubit density matrix (I + xX + yY + zZ) / 2."""
    matrix = 0.5 * (
        IDENTITY_2 + vector.x * PAULI_X + vector.y * PAULI_Y + vector.z * PAULI_Z
    )
    return DensityMatrix(matrix)


def require_same_register(state: PureState, num_qubits: int, what: str = "state") -> None:
    """Raise DimensionError unless the state spans num_qubits qubits."""
    if state.num_qubits != num_qubits:
        raise DimensionError(
            f"{what} has {state.num_qubits} qubits, expected {num_qubits}",
        )


def single_qubit(state: PureState, what: str = "state") -> PureState:
    """Return the state after checking it is a single qubit."""
    if state.num_qubits != 1:
        raise DimensionError(f"{what} must be a single qubit, got {state.num_qubits} qubits")
    return state
