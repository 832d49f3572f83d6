"""Numerical kernel: Taylor jets, ODE integration, quadrature, divergence probing, grid shortest paths."""

from .divergence import ProbeResult, divergence_probe
from .jets import Jet, JetOrderError
from .ode import NonFiniteRHS, OdeError, OdeTrajectory, StepSizeUnderflow, integrate_ode
from .quadrature import QuadratureError, cumulative_integral, gauss_legendre_panels, quad_adaptive
from .shortest_path import BACKEND, GridDistance, grid_distance_field, grid_shortest_path, richardson, stencil

__all__ = [
    "Jet",
    "JetOrderError",
    "OdeError",
    "OdeTrajectory",
    "StepSizeUnderflow",
    "NonFiniteRHS",
    "integrate_ode",
    "QuadratureError",
    "quad_adaptive",
    "cumulative_integral",
    "gauss_legendre_panels",
    "ProbeResult",
    "divergence_probe",
    "BACKEND",
    "GridDistance",
    "grid_shortest_path",
    "grid_distance_field",
    "richardson",
    "stencil",
]
