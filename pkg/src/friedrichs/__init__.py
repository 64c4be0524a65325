"""Unstable-state decay in the Friedrichs model.

Exact evolution of the box-discretized Hamiltonian, the second-sheet
resonance pole, Hardy-class projections of sampled functions, and the
restricted pole contributions they are compared against.
"""

from .errors import *  # noqa: F401,F403
from .evolution import *  # noqa: F401,F403
from .hardy import *  # noqa: F401,F403
from .model import *  # noqa: F401,F403
from .restriction import *  # noqa: F401,F403
from .spectral import *  # noqa: F401,F403
from . import errors, evolution, hardy, model, restriction, spectral

__version__ = "0.1.0"

__all__ = (
    ["__version__"]
    + [n for n in dir(errors) if n.endswith(("Error", "Warning"))]
    + model.__all__
    + spectral.__all__
    + hardy.__all__
    + restriction.__all__
    + evolution.__all__
)
