"""
Resolvent bounds for a Galerkin solution:

    ||u|| <= ||f|| / lambda,   ||grad u|| <= ||f|| / sqrt(lambda),   ||Hess u||_HS <= sqrt(2) ||f||,

all in L^2 of the weighted measure the solution was assembled against.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from ..core.constants import BOUND_TOL, HESSIAN_RATIO_MAX, STDERR_MULTIPLIER
from ..core.errors import MeasureMismatchError
from ..core.quadrature import QuadratureRule
from ..domains.base import ConvexDomain
from ..solver.density import WeightDensity
from ..solver.galerkin import GalerkinSolution
from ..solver.rhs import as_forcing

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)


@dataclass
class SobolevReport:
    """Norms of u, grad u, Hess u and f with the bound ratios (each <= 1 when the bound holds)."""
    lam: float
    norm_u: float
    norm_grad: float
    norm_hess: float
    norm_f: float
    ratio_u: float
    ratio_grad: float
    ratio_hess: float
    norm_w22: float
    ratio_w22: float
    quadrature_stderr: Dict[str, float] = field(default_factory=dict)
    stochastic: bool = False
    rule: str = ""

    def tolerance(self, key: str, bound_tol: float = BOUND_TOL,
                  multiplier: float = STDERR_MULTIPLIER) -> float:
        """Slack for ratio `key`: bound_tol, or multiplier x relative stderr for Monte Carlo rules."""
        if not self.stochastic:
            return bound_tol
        norm = {"ratio_u": self.norm_u, "ratio_grad": self.norm_grad}.get(key, self.norm_u)
        stderr = self.quadrature_stderr.get(key.replace("ratio_", "norm_"), 0.0)
        relative = stderr / norm if norm > 0.0 else 0.0
        f_relative = self.quadrature_stderr.get("norm_f", 0.0) / self.norm_f if self.norm_f > 0 else 0.0
        return max(bound_tol, multiplier * (relative + f_relative))

    def violations(self, bound_tol: float = BOUND_TOL, multiplier: float = STDERR_MULTIPLIER,
                   hessian_max: Optional[float] = HESSIAN_RATIO_MAX) -> List[Dict[str, Any]]:
        """Failed bounds as {criterion, value, limit} records; the Hessian bound only when hessian_max is set."""
        out = []
        for key in ("ratio_u", "ratio_grad"):
            limit = 1.0 + self.tolerance(key, bound_tol, multiplier)
            value = getattr(self, key)
            if not value <= limit:
                out.append({"criterion": key, "value": value, "limit": limit})
        if hessian_max is not None and not self.ratio_hess <= hessian_max:
            out.append({"criterion": "ratio_hess", "value": self.ratio_hess, "limit": hessian_max})
        return out

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _same_measure(density: WeightDensity, other: WeightDensity) -> bool:
    return (density.mode == other.mode and density.potential is other.potential
            and density.domain is other.domain)


def _norm_with_stderr(rule: QuadratureRule, weighted_sq: np.ndarray):
    """(sqrt(I), stderr of sqrt(I)) for I = int weighted_sq; delta method for the root."""
    estimate, stderr = rule.integrate_with_stderr(weighted_sq)
    norm = math.sqrt(max(estimate, 0.0))
    return norm, (stderr / (2.0 * norm) if norm > 0.0 else 0.0)


def sobolev_report(
    sol: GalerkinSolution,
    density: Optional[WeightDensity] = None,
    domain: Optional[ConvexDomain] = None,
    f=None,
    rule: Optional[QuadratureRule] = None,
) -> SobolevReport:
    """
    Norms by quadrature against the solution's own weight.

    Without `rule` the assembly rule is reused, which makes the first two ratios obey
    the discrete energy identity exactly. An override rule decouples the check from
    the discretisation.

    Raises:
        MeasureMismatchError: density or domain differ from those of the solve.
    """
    system = sol.system
    if density is not None and not _same_measure(density, system.density):
        raise MeasureMismatchError(
            f"report density {density.describe()} differs from solve density {system.density.describe()}"
        )
    if domain is not None and domain is not system.density.domain:
        raise MeasureMismatchError(
            f"report domain {domain.describe()} differs from solve domain "
            f"{system.density.domain.describe() if system.density.domain is not None else None}"
        )
    density = system.density
    forcing = as_forcing(f) if f is not None else system.forcing
    rule = rule or system.rule

    wrho = density.values(rule.nodes)
    expansion = sol.expansion
    u = expansion.value_batch(rule.nodes)
    grad = expansion.gradient_batch(rule.nodes)
    hess = expansion.hessian_batch(rule.nodes)
    fvals = forcing(rule.nodes)

    norm_u, se_u = _norm_with_stderr(rule, wrho * u ** 2)
    norm_grad, se_grad = _norm_with_stderr(rule, wrho * np.einsum("na,na->n", grad, grad))
    norm_hess, se_hess = _norm_with_stderr(rule, wrho * np.einsum("nab,nab->n", hess, hess))
    norm_f, se_f = _norm_with_stderr(rule, wrho * fvals ** 2)

    lam = sol.lam
    root = math.sqrt(lam)
    norm_w22 = norm_u + norm_grad + norm_hess
    if norm_f > 0.0:
        ratio_u = lam * norm_u / norm_f
        ratio_grad = root * norm_grad / norm_f
        ratio_hess = norm_hess / (SQRT2 * norm_f)
        ratio_w22 = norm_w22 / ((1.0 / lam + 1.0 / root + SQRT2) * norm_f)
    else:
        ratio_u = ratio_grad = ratio_hess = ratio_w22 = 0.0

    report = SobolevReport(
        lam=lam,
        norm_u=norm_u,
        norm_grad=norm_grad,
        norm_hess=norm_hess,
        norm_f=norm_f,
        ratio_u=ratio_u,
        ratio_grad=ratio_grad,
        ratio_hess=ratio_hess,
        norm_w22=norm_w22,
        ratio_w22=ratio_w22,
        quadrature_stderr={"norm_u": se_u, "norm_grad": se_grad, "norm_hess": se_hess, "norm_f": se_f},
        stochastic=rule.is_stochastic,
        rule=rule.description,
    )
    logger.debug("sobolev report: ratio_u=%.6g ratio_grad=%.6g ratio_hess=%.6g", ratio_u, ratio_grad, ratio_hess)
    return report
