"""Two-dimensional field coupled to a uniformly accelerated oscillator detector."""

from .correlator import coincidence_delta_phi_sq, delta_two_point
from .kinematics import SpacetimePoint, to_null, trajectory
from .oscillator import ModelParams, susceptibility
from .quadrature import QuadratureSpec
from .stress import WorldTube, stress_at, world_tube_flux

__all__ = [
    "ModelParams", "QuadratureSpec", "SpacetimePoint", "WorldTube",
    "coincidence_delta_phi_sq", "delta_two_point", "stress_at", "susceptibility",
    "to_null", "trajectory", "world_tube_flux",
]
__version__ = "0.1.0"
