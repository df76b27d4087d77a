"""Einsel - decoherence and einselection in the central-spin model.

Quick Start:
    >>> from einsel.centralspin import (
    ...     ProductEnvironment, TimeGrid, bloch_trajectory, random_couplings,
    ... )
    >>> from einsel.qcore import PureState
    >>> model = random_couplings(12, seed=7)
    >>> central = PureState.from_bloch_angles(theta=1.0, phi=0.0)
    >>> points = bloch_trajectory(
    ...     model, central, ProductEnvironment.plus_x(12), TimeGrid.linspace(3.0, 50)
    ... )

Typicality:
    >>> from einsel.kinematics import HaarSampler, SubsystemSplit, mc_average_distance
    >>> stats = mc_average_distance(10, SubsystemSplit(10, [0]), 500, HaarSampler(10, seed=1))
    >>> stats.bound_satisfied()
    True
"""

from einsel.__version__ import __author__, __email__, __license__, __version__
from einsel.centralspin import CentralSpinModel, ProductEnvironment, TimeGrid
from einsel.errors import EinselError
from einsel.kinematics import HaarSampler, SubsystemSplit
from einsel.runner import SampleRunner

__all__ = [
    "CentralSpinModel",
    "EinselError",
    "HaarSampler",
    "ProductEnvironment",
    "SampleRunner",
    "SubsystemSplit",
    "TimeGrid",
    "__version__",
    "__author__",
    "__email__",
    "__license__",
]
