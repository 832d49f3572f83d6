"""Numerical laboratory for spacelike translating solitons in Lorentzian products ``M x R``."""

from .bounds import BoundFunction, CurveSample, classify_conditions, parse_bound_spec
from .chart_calculus import ChartMetric
from .errors import (
    DegeneratePlaneError,
    GeometryError,
    MetricError,
    NotASolitonError,
    PreconditionError,
    SpacelikeViolation,
)
from .lorentz_graphs import GraphHypersurface, ProductSpace
from .soliton_zoo import PhiProfile, PiecewiseCurve, SolitonProfile, build_phi, grim_reaper, solve_profile_ode

__version__ = "0.1.0"

__all__ = [
    "BoundFunction",
    "ChartMetric",
    "CurveSample",
    "GraphHypersurface",
    "PhiProfile",
    "PiecewiseCurve",
    "ProductSpace",
    "SolitonProfile",
    "build_phi",
    "classify_conditions",
    "grim_reaper",
    "parse_bound_spec",
    "solve_profile_ode",
    "GeometryError",
    "MetricError",
    "DegeneratePlaneError",
    "SpacelikeViolation",
    "NotASolitonError",
    "PreconditionError",
]
