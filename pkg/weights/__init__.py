"""
Weights module - example convex weights U1, U2, quadratic, and the penalized V_alpha.
"""

from .certificates import GradientBoundReport, GrowthReport, gradient_bound_report, growth_certificate
from .factory import build_weight
from .penalized import PenalizedPotential, v_alpha_eval, v_alpha_limit_series
from .scalar import PHI_FUNCTIONS, PSI_FUNCTIONS, PathIntegrand, ScalarFunction
from .u1 import WeightU1, u1_eval, uniform_tau
from .u2 import WeightU2, u2_eval

__all__ = [
    "WeightU1",
    "WeightU2",
    "PenalizedPotential",
    "ScalarFunction",
    "PathIntegrand",
    "PHI_FUNCTIONS",
    "PSI_FUNCTIONS",
    "u1_eval",
    "u2_eval",
    "v_alpha_eval",
    "v_alpha_limit_series",
    "uniform_tau",
    "growth_certificate",
    "gradient_bound_report",
    "GrowthReport",
    "GradientBoundReport",
    "build_weight",
]
