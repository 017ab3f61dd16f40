"""neklab: a numerical laboratory for long-time stability of near-integrable
Hamiltonian systems with finitely differentiable perturbations.

Subpackages cover function representations and norms, analytic smoothing,
steepness estimation, the geography of resonances, resonant normal forms,
long-time symplectic integration, and a batch experiment CLI.
"""

__version__ = "0.1.0"

from .gridfn import Axis, DomainSpec, GridFunction, action_axis, angle_axis
from .trigpoly import ActionPoly, TrigPoly, poisson_bracket

__all__ = [
    "ActionPoly",
    "Axis",
    "DomainSpec",
    "GridFunction",
    "TrigPoly",
    "action_axis",
    "angle_axis",
    "poisson_bracket",
    "__version__",
]
