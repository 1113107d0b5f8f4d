"""
One-dimensional reference solutions of lambda u - u'' + x u' = f on (-inf, 0] with
the reflecting condition u'(0) = 0, against the standard Gaussian weight.

- closed form for lambda = 1, f(x) = x:
      u(x) = x/2 - (sqrt(2 pi)/4) erfcx(-x/sqrt(2))
  (the homogeneous solution sqrt(pi/2) erfcx(-x/sqrt(2)) has derivative x h + 1).
- P1 finite elements with lumped mass on [left, 0], zero flux at both ends, solved
  as a tridiagonal system.
"""

import math
from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, Tuple

import numpy as np
from scipy.linalg import solve_banded
from scipy.special import erfcx

from ..core.constants import ORACLE_GRID_STEP, ORACLE_L2_TOL, ORACLE_LEFT_END
from ..core.quadrature import SQRT_2PI

_HALF_SQRT_2PI = 0.25 * SQRT_2PI


def half_line_solution(x) -> np.ndarray:
    """Closed-form reflected solution for lambda = 1, f(x) = x."""
    x = np.asarray(x, dtype=float)
    return 0.5 * x - _HALF_SQRT_2PI * erfcx(-x / math.sqrt(2.0))


def half_line_derivative(x) -> np.ndarray:
    """u'(x) = -x h(x) / 2; vanishes at the boundary."""
    x = np.asarray(x, dtype=float)
    h = math.sqrt(0.5 * math.pi) * erfcx(-x / math.sqrt(2.0))
    return -0.5 * x * h


def gaussian_density(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * x * x) / SQRT_2PI


def finite_difference_oracle(
    f: Callable[[np.ndarray], np.ndarray],
    lam: float = 1.0,
    left: float = ORACLE_LEFT_END,
    right: float = 0.0,
    step: float = ORACLE_GRID_STEP,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Grid and nodal values of the reflected solve.

    Weak form lam int u v g + int u' v' g = int f v g with g the Gaussian density:
    element stiffness uses g at the midpoint, mass is lumped to the nodes.
    """
    if not lam > 0.0:
        raise ValueError(f"lambda must be positive, got {lam}")
    cells = int(round((right - left) / step))
    x = np.linspace(left, right, cells + 1)
    h = np.diff(x)
    g = gaussian_density(x)
    g_mid = gaussian_density(0.5 * (x[:-1] + x[1:]))
    k_edge = g_mid / h

    mass = np.zeros_like(x)
    mass[:-1] += 0.5 * h * g[:-1]
    mass[1:] += 0.5 * h * g[1:]

    diag = lam * mass
    diag[:-1] += k_edge
    diag[1:] += k_edge
    banded = np.zeros((3, x.shape[0]))
    banded[0, 1:] = -k_edge
    banded[1] = diag
    banded[2, :-1] = -k_edge
    rhs = mass * np.asarray(f(x), dtype=float)
    u = solve_banded((1, 1), banded, rhs)
    return x, u


def weighted_l2(x: np.ndarray, values: np.ndarray) -> float:
    """sqrt(int values^2 g dx) by the trapezoid rule on the grid x."""
    integrand = values ** 2 * gaussian_density(x)
    return math.sqrt(float(np.sum(0.5 * np.diff(x) * (integrand[:-1] + integrand[1:]))))


@dataclass
class OracleComparison:
    """L^2 distances between the reference solutions and a candidate on [left, 0]."""
    candidate_vs_fd: float
    candidate_vs_closed_form: float
    fd_vs_closed_form: float
    candidate_slope_at_boundary: float
    tolerance: float = ORACLE_L2_TOL

    @property
    def passed(self) -> bool:
        return self.candidate_vs_fd <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out["passed"] = self.passed
        return out


def compare_with_oracles(candidate: Callable[[np.ndarray], np.ndarray],
                         candidate_derivative: Callable[[np.ndarray], np.ndarray],
                         step: float = ORACLE_GRID_STEP,
                         left: float = ORACLE_LEFT_END) -> OracleComparison:
    """Compare a 1-D solution for lambda = 1, f(x) = x against both references."""
    x, u_fd = finite_difference_oracle(lambda t: t, 1.0, left, 0.0, step)
    exact = half_line_solution(x)
    u = np.asarray(candidate(x), dtype=float)
    slope = float(np.asarray(candidate_derivative(np.array([0.0])), dtype=float).ravel()[0])
    return OracleComparison(
        candidate_vs_fd=weighted_l2(x, u - u_fd),
        candidate_vs_closed_form=weighted_l2(x, u - exact),
        fd_vs_closed_form=weighted_l2(x, u_fd - exact),
        candidate_slope_at_boundary=slope,
    )
