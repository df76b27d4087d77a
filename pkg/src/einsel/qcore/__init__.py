"""Dense state-vector and density-matrix primitives.

Available:
    - PureState, DensityMatrix, BlochVector, QubitSubset: immutable value types
    - tensor, partial_trace, projector, dephase, from_bloch: composition/reduction
    - trace_distance, von_neumann_entropy, purity, bloch_vector,
      maximally_mixed, coherence: measures
"""

from __future__ import annotations

from einsel.qcore.measures import (
    bloch_vector,
    coherence,
    maximally_mixed,
    purity,
    trace_distance,
    von_neumann_entropy,
)
from einsel.qcore.ops import dephase, from_bloch, partial_trace, projector, tensor
from einsel.qcore.states import BlochVector, DensityMatrix, PureState, QubitSubset

__all__ = [
    "BlochVector",
    "DensityMatrix",
    "PureState",
    "QubitSubset",
    "bloch_vector",
    "coherence",
    "dephase",
    "from_bloch",
    "maximally_mixed",
    "partial_trace",
    "projector",
    "purity",
    "tensor",
    "trace_distance",
    "von_neumann_entropy",
]
