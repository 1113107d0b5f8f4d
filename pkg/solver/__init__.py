"""
Hermite spectral Galerkin solver for lambda u - L u = f.
"""

from .assembly import GalerkinSystem, assemble, tree_reduce
from .density import WeightDensity, build_density, build_rule, domain_kind
from .galerkin import GalerkinSolution, evaluate, solve, solve_problem
from .hermite import (
    HermiteBasis,
    HermiteExpansion,
    hermite_function,
    hermite_table,
    project_coefficients,
    total_degree_indices,
)
from .operator import apply_operator, apply_operator_batch, strong_residual
from .rhs import (
    CallableForcing,
    ConstantForcing,
    Forcing,
    HermiteForcing,
    LinearForcing,
    as_forcing,
    build_forcing,
)

__all__ = [
    "GalerkinSystem",
    "assemble",
    "tree_reduce",
    "WeightDensity",
    "build_density",
    "build_rule",
    "domain_kind",
    "GalerkinSolution",
    "evaluate",
    "solve",
    "solve_problem",
    "HermiteBasis",
    "HermiteExpansion",
    "hermite_function",
    "hermite_table",
    "project_coefficients",
    "total_degree_indices",
    "apply_operator",
    "apply_operator_batch",
    "strong_residual",
    "Forcing",
    "HermiteForcing",
    "ConstantForcing",
    "LinearForcing",
    "CallableForcing",
    "as_forcing",
    "build_forcing",
]
