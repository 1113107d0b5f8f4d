"""
Verify module - executable checks of the regularity, penalization, Neumann and
integration-by-parts statements, plus the spectrum identities and 1-D oracles.
"""

from .ibp import IbpResult, ibp_check, ibp_random_cases, random_test_function
from .identities import IdentityReport, hessian_hs_report, identities, lambda_sum_check, lambda_sum_identity
from .neumann import NeumannReport, boundary_flux, neumann_residual, neumann_series
from .oracle import (
    OracleComparison,
    compare_with_oracles,
    finite_difference_oracle,
    half_line_derivative,
    half_line_solution,
)
from .penalization import PenalizationSweep, penalization_sweep, restricted_distance
from .sobolev import SobolevReport, sobolev_report
from .suites import CheckResult, SuiteReport, gradient_limit_excess, projection_suite, prox_suite

__all__ = [
    "SobolevReport",
    "sobolev_report",
    "PenalizationSweep",
    "penalization_sweep",
    "restricted_distance",
    "NeumannReport",
    "neumann_residual",
    "neumann_series",
    "boundary_flux",
    "IbpResult",
    "ibp_check",
    "ibp_random_cases",
    "random_test_function",
    "IdentityReport",
    "identities",
    "lambda_sum_check",
    "lambda_sum_identity",
    "hessian_hs_report",
    "OracleComparison",
    "compare_with_oracles",
    "finite_difference_oracle",
    "half_line_solution",
    "half_line_derivative",
    "CheckResult",
    "SuiteReport",
    "prox_suite",
    "gradient_limit_excess",
    "projection_suite",
]
