"""
Prox module - convex potentials and their Moreau-Yosida envelopes along H.
"""

from .checks import (
    EnvelopeSeries,
    envelope_convergence_series,
    gradient_monotonicity_check,
    grid_search_prox,
    prox_lipschitz_probe,
    semigroup_check,
    subdifferential_inclusion_check,
)
from .moreau import EnvelopePotential, ProxResult, envelope_grad, envelope_value, prox
from .potential import (
    ConstantPotential,
    ConvexPotential,
    LinearPotential,
    QuadraticPotential,
    ZeroPotential,
    central_difference,
)

__all__ = [
    "ConvexPotential",
    "ConstantPotential",
    "ZeroPotential",
    "LinearPotential",
    "QuadraticPotential",
    "EnvelopePotential",
    "ProxResult",
    "prox",
    "envelope_value",
    "envelope_grad",
    "semigroup_check",
    "gradient_monotonicity_check",
    "subdifferential_inclusion_check",
    "prox_lipschitz_probe",
    "grid_search_prox",
    "envelope_convergence_series",
    "EnvelopeSeries",
    "central_difference",
]
