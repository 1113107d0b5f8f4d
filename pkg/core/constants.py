"""
Core constants for the weighted Gaussian laboratory.
All default tolerances, iteration caps and grid sizes live here.
"""

from enum import Enum
from typing import Final, Tuple

# =============================================================================
# ENUMERATIONS
# =============================================================================

class QuadratureKind(str, Enum):
    """Integration rule families."""
    TENSOR_GAUSS_HERMITE = "tensor-gauss-hermite"
    MONTE_CARLO = "monte-carlo"
    HALFSPACE_GAUSS = "halfspace-gauss"          # rotated half-line rule, exact boundary
    MASKED_MONTE_CARLO = "masked-monte-carlo"    # indicator-masked samples
    SURFACE = "surface"                          # deterministic rule on G^{-1}(0)
    SURFACE_MONTE_CARLO = "surface-monte-carlo"  # sampled rule on G^{-1}(0)
    ELLIPSOID_POLAR = "ellipsoid-polar"          # radial Gauss-Legendre x sphere rule


class DomainKind(str, Enum):
    """Shipped convex domains."""
    NONE = "none"
    WHOLE = "whole"
    HALFSPACE = "halfspace"
    ELLIPSOID = "ellipsoid"
    GENERIC = "generic"


class WeightKind(str, Enum):
    """Shipped convex weights."""
    ZERO = "zero"
    QUADRATIC = "quadratic"
    U1 = "u1"
    U2 = "u2"


class SolverMode(str, Enum):
    """Which density the Galerkin system is assembled against."""
    WHOLE_SPACE = "whole-space"                      # e^{-U} on R^n
    WHOLE_SPACE_PENALIZED = "whole-space-penalized"  # e^{-V_alpha} on R^n
    DOMAIN_DIRECT = "domain-direct"                  # e^{-U} 1_Omega


class RhsKind(str, Enum):
    """Forcing terms accepted from configuration."""
    HERMITE = "hermite"
    CONSTANT = "constant"
    LINEAR = "linear"


class Command(str, Enum):
    """Batch commands."""
    SOLVE = "solve"
    PENALIZE_SWEEP = "penalize-sweep"
    PROX_CHECK = "prox-check"
    PROJECT_CHECK = "project-check"
    NEUMANN_CHECK = "neumann-check"
    IBP_CHECK = "ibp-check"
    IDENTITIES = "identities"


# =============================================================================
# TRUNCATED MODEL
# =============================================================================

DEFAULT_DIMENSION: Final[int] = 4
MAX_TENSOR_DIMENSION: Final[int] = 12
DEFAULT_SEED: Final[int] = 20170101
TENSOR_NODE_BUDGET: Final[int] = 2_000_000
QUADRATURE_WEIGHT_SUM_TOL: Final[float] = 1e-12

# Half-line rule: Gauss-Legendre on [s - HALF_LINE_SPAN, s] times the Gaussian density
HALF_LINE_SPAN: Final[float] = 16.0
HALF_LINE_POINTS: Final[int] = 160

# Ellipsoid polar rules (deterministic up to this dimension, masked Monte Carlo above)
POLAR_MAX_DIMENSION: Final[int] = 3

# Path quadrature on [0, 1]
DEFAULT_XI_NODES: Final[int] = 64

# =============================================================================
# PROJECTION
# =============================================================================

PROJECTION_TOL: Final[float] = 1e-12
PROJECTION_MAX_ITER: Final[int] = 200
VI_SAMPLES: Final[int] = 64
MEMBERSHIP_TOL: Final[float] = 1e-10

# =============================================================================
# PROX (MOREAU-YOSIDA ALONG H)
# =============================================================================

PROX_TOL: Final[float] = 1e-10
PROX_MAX_ITER: Final[int] = 500
ARMIJO_C: Final[float] = 1e-4
ARMIJO_SHRINK: Final[float] = 0.5
LEVENBERG_INIT: Final[float] = 1e-8
GRID_SEARCH_STEP: Final[float] = 1e-3
GRID_SEARCH_RADIUS: Final[float] = 5.0
DYADIC_ALPHA_GRID: Final[Tuple[float, ...]] = tuple(2.0 ** -k for k in range(11))

# =============================================================================
# WEIGHTS
# =============================================================================

GROWTH_PROBE_RANGE: Final[float] = 20.0
GROWTH_PROBE_POINTS: Final[int] = 4001

# =============================================================================
# SOLVER
# =============================================================================

DEFAULT_DEGREE: Final[int] = 10
DEFAULT_LAMBDA: Final[float] = 1.0
DEFAULT_ALPHA: Final[float] = 0.1
DEFAULT_TENSOR_POINTS: Final[int] = 16
DEFAULT_MC_SAMPLES: Final[int] = 100_000
DENSE_SOLVE_LIMIT: Final[int] = 5000
LINEAR_SOLVE_RTOL: Final[float] = 1e-10
REFINEMENT_STEPS: Final[int] = 3
ASSEMBLY_CHUNK: Final[int] = 4096
EVALUATION_CHUNK: Final[int] = 512      # points per basis evaluation batch
FD_STEP: Final[float] = 1e-5

# =============================================================================
# VERIFY
# =============================================================================

DEFAULT_ALPHA_GRID: Final[Tuple[float, ...]] = (1.0, 0.3, 0.1, 0.03, 0.01)
DEFAULT_NEUMANN_DEGREES: Final[Tuple[int, ...]] = (4, 8, 12)
DEFAULT_BOUNDARY_RESOLUTION: Final[int] = 64
BOUND_TOL: Final[float] = 1e-8
HESSIAN_RATIO_MAX: Final[float] = 1.05
STDERR_MULTIPLIER: Final[float] = 3.0
IBP_TOL: Final[float] = 1e-8
IBP_CLOSED_FORM_TOL: Final[float] = 1e-10
IBP_RANDOM_CASES: Final[int] = 20
NEUMANN_REDUCTION: Final[float] = 0.25
PENALIZATION_REDUCTION: Final[float] = 0.25   # half-line grid 1..0.01 reaches about 0.185
PENALIZATION_ZERO_TOL: Final[float] = 1e-9
OU_COEFF_TOL: Final[float] = 1e-9
ORACLE_GRID_STEP: Final[float] = 1e-3
ORACLE_LEFT_END: Final[float] = -8.0
ORACLE_L2_TOL: Final[float] = 1e-3
IDENTITY_K: Final[int] = 100
LAMBDA_SQUARED_SUM: Final[float] = 1.0 / 6.0
LAMBDA_SUM: Final[float] = 0.5
LAMBDA_SQUARED_SUM_TOL: Final[float] = 6e-7
FIRST_EIGENVALUE_RTOL: Final[float] = 1e-12

# =============================================================================
# PROPERTY SUITES
# =============================================================================

SEMIGROUP_TOL: Final[float] = 1e-7              # relative to 1 + |rhs|
VALUE_MONOTONE_SLACK: Final[float] = 1e-9
GRADIENT_LIMIT_TOL: Final[float] = 1e-6
GRADIENT_LIMIT_CONTRACTION: Final[float] = 0.6  # gap ratio between the last two dyadic alphas
GRADIENT_MONOTONE_SLACK: Final[float] = 1e-8
SUBDIFFERENTIAL_SLACK: Final[float] = 1e-8
PROX_LIPSCHITZ_SLACK: Final[float] = 1e-8
PROX_GRADIENT_FD_TOL: Final[float] = 1e-5
GRID_MINIMIZER_TOL: Final[float] = 2e-3
GRID_VALUE_TOL: Final[float] = 1e-5
VI_SLACK: Final[float] = 1e-9
IDEMPOTENCE_TOL: Final[float] = 1e-10
OFFSET_LIPSCHITZ_SLACK: Final[float] = 1e-9
OFFSET_MONOTONE_SLACK: Final[float] = 1e-9
PROJECTION_LIPSCHITZ_SLACK: Final[float] = 1e-8
DISTANCE_CONVEXITY_SLACK: Final[float] = 1e-9
DISTANCE_FD_TOL: Final[float] = 1e-6
SUITE_PROBES: Final[int] = 8                    # displacements per probe point
CONVEXITY_SLACK: Final[float] = 1e-9
GRADIENT_PROBE_TOL: Final[float] = 1e-5

# =============================================================================
# OUTPUT
# =============================================================================

FLOAT_FORMAT: Final[str] = "%.17g"
SUMMARY_FILE: Final[str] = "summary.json"
