"""Distance and information measures on density matrices."""

from __future__ import annotations

import math

import numpy as np
from scipy import linalg

from einsel.errors import DimensionError, StateError
from einsel.qcore.ops import dephase
from einsel.qcore.states import EIGENVALUE_FLOOR, TRACE_TOLERANCE, BlochVector, DensityMatrix

MAX_BLOCH_LENGTH = 1.0 - 2.0 * EIGENVALUE_FLOOR + TRACE_TOLERANCE


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """D(rho, sigma) = 1/2 sum |lambda_i| over eigenvalues of rho - sigma.

    Raises:
        DimensionError: If the matrices have different dimensions.
    """
    if rho.dim != sigma.dim:
        raise DimensionError(f"Cannot compare dimensions {rho.dim} and {sigma.dim}")
    difference = rho.entries - sigma.entries
    difference = 0.5 * (difference + difference.conj().T)
    distance = 0.5 * float(np.sum(np.abs(linalg.eigvalsh(difference))))
    return min(distance, 1.0)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy in bits, with 0 log 0 = 0.

    Raises:
        StateError: If an eigenvalue is more negative than solver noise allows.
    """
    values = linalg.eigvalsh(rho.entries)
    if values[0] < EIGENVALUE_FLOOR:
        raise StateError(f"Matrix has negative eigenvalue {values[0]:.3g}")
    positive = values[values > 0.0]
    entropy = -float(np.sum(positive * np.log2(positive)))
    return max(entropy, 0.0)


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2)."""
    # Tr(rho rho) = sum |rho_ij|^2 for Hermitian rho
    return float(np.sum(np.abs(rho.entries) ** 2))


def bloch_vector(rho: DensityMatrix) -> BlochVector:
    """Bloch coordinates of a qubit state.

    Convention: x = 2 Re(rho_01), y = -2 Im(rho_01), z = rho_00 - rho_11, so
    (|0> + i|1>)/sqrt(2) maps to (0, 1, 0).

    Raises:
        DimensionError: If rho is not 2x2.
    """
    if rho.dim != 2:
        raise DimensionError(f"Bloch vectors need a qubit state, got dimension {rho.dim}")
    off_diagonal = complex(rho.entries[0, 1])
    x = 2.0 * off_diagonal.real
    y = -2.0 * off_diagonal.imag
    z = float(np.real(rho.entries[0, 0] - rho.entries[1, 1]))

    # clip the slack DensityMatrix tolerates outside the ball
    length = math.sqrt(x * x + y * y + z * z)
    if 1.0 < length <= MAX_BLOCH_LENGTH:
        x, y, z = x / length, y / length, z / length
    return BlochVector(x, y, z)


def maximally_mixed(dim: int) -> DensityMatrix:
    """Identity / dim.

    Raises:
        DimensionError: If dim < 2.
    """
    if dim < 2:
        raise DimensionError(f"Maximally mixed state needs dimension >= 2, got {dim}")
    return DensityMatrix(np.eye(dim, dtype=np.complex128) / dim, check=False)


def coherence(rho: DensityMatrix) -> float:
    """Trace distance from rho to its pointer-basis dephasing."""
    return trace_distance(rho, dephase(rho))
