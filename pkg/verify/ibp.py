"""
Integration by parts with boundary traces:

    int_Omega (d_k phi - phi d_k U - phi x_k) e^{-U} d gamma
        = int_{G=0} phi (d_k G / |grad G|) e^{-U} d rho
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional

import numpy as np

from ..core.constants import (
    DEFAULT_BOUNDARY_RESOLUTION,
    DEFAULT_MC_SAMPLES,
    IBP_RANDOM_CASES,
    IBP_TOL,
    STDERR_MULTIPLIER,
)
from ..core.errors import IndexRangeError
from ..core.model import TruncatedModel
from ..core.quadrature import QuadratureRule
from ..domains.base import ConvexDomain
from ..prox.potential import ConvexPotential
from ..solver.hermite import HermiteBasis, HermiteExpansion

logger = logging.getLogger(__name__)


@dataclass
class IbpResult:
    config_id: str
    k: int
    lhs: float
    rhs: float
    stderr: float = 0.0

    @property
    def abs_diff(self) -> float:
        return abs(self.lhs - self.rhs)

    def tolerance(self, tol: float = IBP_TOL, multiplier: float = STDERR_MULTIPLIER) -> float:
        return max(tol, multiplier * self.stderr)

    def passed(self, tol: float = IBP_TOL, multiplier: float = STDERR_MULTIPLIER) -> bool:
        return self.abs_diff <= self.tolerance(tol, multiplier)

    def row(self) -> List[Any]:
        return [self.config_id, self.lhs, self.rhs, self.abs_diff, self.stderr]

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out["abs_diff"] = self.abs_diff
        return out


def _values_and_grad(phi, X: np.ndarray):
    if hasattr(phi, "value_batch") and hasattr(phi, "gradient_batch"):
        return phi.value_batch(X), phi.gradient_batch(X)
    values = np.array([phi.value(x) for x in X])
    grads = np.array([phi.gradient(x) for x in X]).reshape(X.shape)
    return values, grads


def ibp_check(
    model: TruncatedModel,
    weight: ConvexPotential,
    domain: ConvexDomain,
    phi,
    k: int,
    rule: Optional[QuadratureRule] = None,
    boundary_resolution: int = DEFAULT_BOUNDARY_RESOLUTION,
    resolution: int = 16,
    mc_samples: int = DEFAULT_MC_SAMPLES,
    rng: Optional[np.random.Generator] = None,
    boundary: Optional[QuadratureRule] = None,
    config_id: str = "",
) -> IbpResult:
    """
    Volume side on the domain's volume rule, boundary side on its surface rule.

    Args:
        phi: Test function with value/gradient (batch methods preferred).
        k: Axis index, 1-based.

    Raises:
        IndexRangeError: k outside 1..n.
        CapabilityError: the domain has no boundary parametrisation.
    """
    if not 1 <= k <= model.n:
        raise IndexRangeError("k", k, model.n)
    axis = k - 1
    rule = rule or domain.volume_rule(model, resolution, mc_samples, 0)
    boundary = boundary or domain.boundary_rule(boundary_resolution, rng or model.sampler(1))

    inside = domain.contains_batch(rule.nodes)
    nodes = rule.nodes
    values, grads = _values_and_grad(phi, nodes)
    integrand = (grads[:, axis] - values * weight.gradient_batch(nodes)[:, axis] - values * nodes[:, axis])
    integrand = np.where(inside, integrand * np.exp(-weight.value_batch(nodes)), 0.0)
    lhs, se_lhs = rule.integrate_with_stderr(integrand)

    if boundary.size:
        b_values, _ = _values_and_grad(phi, boundary.nodes)
        normals = domain.unit_normal_batch(boundary.nodes)
        b_integrand = b_values * normals[:, axis] * np.exp(-weight.value_batch(boundary.nodes))
        rhs, se_rhs = boundary.integrate_with_stderr(b_integrand)
    else:
        rhs, se_rhs = 0.0, 0.0

    return IbpResult(config_id, k, float(lhs), float(rhs), math.hypot(se_lhs, se_rhs))


def random_test_function(n: int, rng: np.random.Generator, degree: int = 3) -> HermiteExpansion:
    """Hermite polynomial with standard normal coefficients, scaled to unit coefficient norm."""
    basis = HermiteBasis(n, degree)
    coeffs = rng.standard_normal(basis.size)
    return HermiteExpansion(basis, coeffs / np.linalg.norm(coeffs))


def ibp_random_cases(
    model: TruncatedModel,
    weight: ConvexPotential,
    domain: ConvexDomain,
    cases: int = IBP_RANDOM_CASES,
    boundary_resolution: int = DEFAULT_BOUNDARY_RESOLUTION,
    resolution: int = 16,
    mc_samples: int = DEFAULT_MC_SAMPLES,
    stream: int = 2,
    label: str = "",
) -> List[IbpResult]:
    """Randomised (phi, k) pairs sharing one volume rule and one boundary rule."""
    rng = model.sampler(stream)
    rule = domain.volume_rule(model, resolution, mc_samples, stream + 1)
    boundary = domain.boundary_rule(boundary_resolution, model.sampler(stream + 2))
    label = label or f"{domain.kind.value}-n{model.n}"
    results = []
    for case in range(cases):
        phi = random_test_function(model.n, rng)
        k = int(rng.integers(1, model.n + 1))
        results.append(ibp_check(model, weight, domain, phi, k, rule=rule, boundary=boundary,
                                 config_id=f"{label}-{case}"))
    failed = sum(not r.passed() for r in results)
    if failed:
        logger.warning("%d of %d integration-by-parts cases outside tolerance (%s)", failed, cases, label)
    return results
