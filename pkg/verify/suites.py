"""
Randomised property suites for the prox operator and the projection.

Each suite returns a SuiteReport: one CheckResult per property with the worst
observed value, the limit it is held to and the pass flag.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np

from ..core.constants import (
    DISTANCE_CONVEXITY_SLACK,
    DISTANCE_FD_TOL,
    DYADIC_ALPHA_GRID,
    FD_STEP,
    GRADIENT_LIMIT_CONTRACTION,
    GRADIENT_LIMIT_TOL,
    GRADIENT_MONOTONE_SLACK,
    GRID_MINIMIZER_TOL,
    GRID_VALUE_TOL,
    IDEMPOTENCE_TOL,
    OFFSET_LIPSCHITZ_SLACK,
    OFFSET_MONOTONE_SLACK,
    PROJECTION_LIPSCHITZ_SLACK,
    PROX_GRADIENT_FD_TOL,
    PROX_LIPSCHITZ_SLACK,
    SEMIGROUP_TOL,
    SUBDIFFERENTIAL_SLACK,
    SUITE_PROBES,
    VALUE_MONOTONE_SLACK,
    VI_SAMPLES,
    VI_SLACK,
)
from ..domains.base import ConvexDomain
from ..prox.checks import (
    EnvelopeSeries,
    envelope_convergence_series,
    gradient_monotonicity_check,
    grid_search_prox,
    prox_lipschitz_probe,
    semigroup_check,
    subdifferential_inclusion_check,
)
from ..prox.moreau import envelope_value, prox
from ..prox.potential import ConvexPotential, central_difference

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    name: str
    worst: float
    limit: float
    passed: bool
    detail: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "worst": self.worst, "limit": self.limit,
                "passed": self.passed, **self.detail}


@dataclass
class SuiteReport:
    suite: str
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[Dict[str, Any]]:
        return [{"criterion": f"{self.suite}.{c.name}", "value": c.worst, "limit": c.limit}
                for c in self.checks if not c.passed]

    def rows(self) -> List[List[Any]]:
        return [[c.name, c.worst, c.limit, int(c.passed)] for c in self.checks]

    def to_dict(self) -> Dict[str, Any]:
        return {"suite": self.suite, "passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def _check(name: str, worst: float, limit: float, upper: bool = True, **detail) -> CheckResult:
    passed = worst <= limit if upper else worst >= limit
    if not passed:
        logger.warning("check %s failed: worst=%.3e limit=%.3e", name, worst, limit)
    return CheckResult(name, float(worst), float(limit), bool(passed), detail)


def _displacements(rng: np.random.Generator, n: int, count: int = SUITE_PROBES) -> np.ndarray:
    """Random nonzero probes with lengths spread over (0.05, 1)."""
    directions = rng.standard_normal((count, n))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    return directions * rng.uniform(0.05, 1.0, size=(count, 1))


def gradient_limit_excess(series: EnvelopeSeries, contraction: float = GRADIENT_LIMIT_CONTRACTION) -> float:
    """
    |gap(alpha_last)| - contraction |gap(alpha_prev)| with gap = |grad f_alpha| - |grad U|.

    The gap is first order in alpha, so on a dyadic grid it halves per step; a
    series whose norms stall away from |grad U| leaves a positive excess.
    """
    if len(series.grad_norms) < 2:
        raise ValueError("gradient_limit_excess needs at least two alphas")
    last = abs(series.grad_norms[-1] - series.potential_grad_norm)
    prev = abs(series.grad_norms[-2] - series.potential_grad_norm)
    return last - contraction * prev


# =============================================================================
# PROX
# =============================================================================

def prox_suite(U: ConvexPotential, n: int, rng: np.random.Generator, cases: int = 100,
               scale: float = 1.5) -> SuiteReport:
    """
    Semigroup identity, monotone envelope convergence on the dyadic grid, gradient
    monotonicity in alpha, the subgradient inclusion, the 1-Lipschitz prox map, the
    gradient formula against finite differences and (n <= 2) the grid-search oracle.
    """
    report = SuiteReport("prox")

    worst = 0.0
    for _ in range(cases):
        x = scale * rng.standard_normal(n)
        alpha, beta = rng.uniform(0.05, 1.0, size=2)
        lhs, rhs = semigroup_check(U, x, alpha, beta)
        worst = max(worst, abs(lhs - rhs) / (1.0 + abs(rhs)))
    report.checks.append(_check("semigroup", worst, SEMIGROUP_TOL))

    value_drop, grad_drop, below_limit, excess = 0.0, 0.0, 0.0, -np.inf
    excess_over_value = -np.inf
    two_sided = 0.0
    for _ in range(max(1, cases // 10)):
        x = scale * rng.standard_normal(n)
        series = envelope_convergence_series(U, x, DYADIC_ALPHA_GRID)
        value_drop = max(value_drop, series.values_nondecreasing)
        grad_drop = max(grad_drop, series.grad_norms_nondecreasing)
        excess_over_value = max(excess_over_value, max(series.values) - series.potential_value)
        below_limit = max(below_limit, series.grad_norms[-1] - series.potential_grad_norm)
        excess = max(excess, gradient_limit_excess(series))
        two_sided = max(two_sided, abs(series.grad_norms[-1] - series.potential_grad_norm))
    report.checks.append(_check("envelope_values_nondecreasing", value_drop, VALUE_MONOTONE_SLACK))
    report.checks.append(_check("envelope_below_potential", excess_over_value, VALUE_MONOTONE_SLACK))
    report.checks.append(_check("envelope_grad_norms_nondecreasing", grad_drop, GRADIENT_MONOTONE_SLACK))
    report.checks.append(_check("envelope_grad_norm_below_limit", below_limit, GRADIENT_LIMIT_TOL,
                                alpha=DYADIC_ALPHA_GRID[-1]))
    report.checks.append(_check("envelope_grad_norm_converges", excess, GRADIENT_LIMIT_TOL,
                                alpha=DYADIC_ALPHA_GRID[-1], gap=two_sided,
                                contraction=GRADIENT_LIMIT_CONTRACTION))

    worst_order, worst_bound, worst_inclusion, worst_lip = 0.0, 0.0, np.inf, 0.0
    for _ in range(max(1, cases // 5)):
        x = scale * rng.standard_normal(n)
        alpha, beta = (float(v) for v in rng.uniform(0.05, 1.0, size=2))
        outer, inner = gradient_monotonicity_check(U, x, alpha, beta)
        worst_order = max(worst_order, outer - inner)
        worst_bound = max(worst_bound, inner - float(np.linalg.norm(U.gradient(x))))
        probes = list(scale * rng.standard_normal((SUITE_PROBES, n)))
        worst_inclusion = min(worst_inclusion, subdifferential_inclusion_check(U, x, alpha, probes))
        worst_lip = max(worst_lip, prox_lipschitz_probe(U, x, alpha, _displacements(rng, n)))
    report.checks.append(_check("gradient_norm_monotone_in_alpha", worst_order, GRADIENT_MONOTONE_SLACK))
    report.checks.append(_check("gradient_norm_below_potential", worst_bound, GRADIENT_MONOTONE_SLACK))
    report.checks.append(_check("subdifferential_inclusion", worst_inclusion, -SUBDIFFERENTIAL_SLACK,
                                upper=False))
    report.checks.append(_check("prox_lipschitz", worst_lip, 1.0 + PROX_LIPSCHITZ_SLACK))

    worst = 0.0
    for _ in range(max(1, cases // 5)):
        x = scale * rng.standard_normal(n)
        alpha = float(rng.uniform(0.1, 1.0))
        grad = prox(U, x, alpha).envelope_grad
        fd = central_difference(lambda y: envelope_value(U, y, alpha), x, FD_STEP)
        worst = max(worst, float(np.linalg.norm(grad - fd)) / max(1.0, float(np.linalg.norm(grad))))
    report.checks.append(_check("envelope_gradient_formula", worst, PROX_GRADIENT_FD_TOL))

    if n <= 2:
        worst_point, worst_value = 0.0, 0.0
        for _ in range(max(1, cases // 20)):
            x = rng.standard_normal(n)
            alpha = float(rng.uniform(0.1, 1.0))
            result = prox(U, x, alpha)
            point, value = grid_search_prox(U, x, alpha)
            worst_point = max(worst_point, float(np.linalg.norm(point - result.minimizer)))
            # the solver's value can only be lower than the grid's
            worst_value = max(worst_value, result.envelope_value - value)
        report.checks.append(_check("grid_search_minimizer", worst_point, GRID_MINIMIZER_TOL))
        report.checks.append(_check("grid_search_value", worst_value, GRID_VALUE_TOL))
    return report


# =============================================================================
# PROJECTION
# =============================================================================

def projection_suite(domain: ConvexDomain, rng: np.random.Generator, cases: int = 100,
                     membership_samples: int = 10_000, scale: float = 2.5) -> SuiteReport:
    """
    Variational inequality, idempotence, 1-Lipschitz and monotone projection and offset,
    convexity of d^2, grad d^2 = 2m and the exact equivalence of d = 0 with membership.
    """
    n = domain.n
    report = SuiteReport("projection")
    samples = domain.sample_points(rng, VI_SAMPLES)

    worst_vi, worst_idem = np.inf, 0.0
    worst_lip, worst_mono = 0.0, np.inf
    worst_offset_lip, worst_offset_mono = 0.0, np.inf
    for _ in range(cases):
        x = scale * rng.standard_normal(n)
        worst_vi = min(worst_vi, domain.vi_residual(x, rng, samples=samples))
        base = domain.project(x)
        worst_idem = max(worst_idem, domain.project(base.point).distance)

        y = scale * rng.standard_normal(n)
        py = domain.project(y).point
        gap = float(np.linalg.norm(x - y))
        if gap > 0.0:
            worst_lip = max(worst_lip, float(np.linalg.norm(base.point - py)) / gap)
        worst_mono = min(worst_mono, float((base.point - py) @ (x - y)))

        hs = _displacements(rng, n)
        worst_offset_lip = max(worst_offset_lip, domain.lipschitz_probe(x, hs))
        for h in hs:
            moved = domain.project(x + h).offset
            worst_offset_mono = min(worst_offset_mono, float((moved - base.offset) @ h))
    report.checks.append(_check("variational_inequality", worst_vi, -VI_SLACK, upper=False))
    report.checks.append(_check("idempotence", worst_idem, IDEMPOTENCE_TOL))
    report.checks.append(_check("projection_lipschitz", worst_lip, 1.0 + PROJECTION_LIPSCHITZ_SLACK))
    report.checks.append(_check("projection_monotone", worst_mono, -OFFSET_MONOTONE_SLACK, upper=False))
    report.checks.append(_check("offset_lipschitz", worst_offset_lip, 1.0 + OFFSET_LIPSCHITZ_SLACK))
    report.checks.append(_check("offset_monotone", worst_offset_mono, -OFFSET_MONOTONE_SLACK, upper=False))

    worst_fd, worst_convexity = 0.0, 0.0
    for _ in range(max(1, cases // 5)):
        x = scale * rng.standard_normal(n)
        grad = domain.grad_distance_sq(x)
        fd = central_difference(domain.distance_sq, x, FD_STEP)
        worst_fd = max(worst_fd, float(np.linalg.norm(grad - fd)) / max(1.0, float(np.linalg.norm(grad))))

        y = scale * rng.standard_normal(n)
        dx, dy = domain.distance_sq(x), domain.distance_sq(y)
        for theta in rng.uniform(0.0, 1.0, size=10):
            mid = domain.distance_sq(theta * x + (1.0 - theta) * y)
            worst_convexity = max(worst_convexity, mid - theta * dx - (1.0 - theta) * dy)
    report.checks.append(_check("distance_gradient", worst_fd, DISTANCE_FD_TOL))
    report.checks.append(_check("distance_sq_convex", worst_convexity, DISTANCE_CONVEXITY_SLACK))

    X = scale * rng.standard_normal((membership_samples, n))
    zero = domain.distance_sq_batch(X) == 0.0
    inside = domain.contains_batch(X, tol=0.0)
    mismatches = int(np.count_nonzero(zero != inside))
    report.checks.append(_check("zero_distance_iff_member", float(mismatches), 0.0,
                                inside=int(inside.sum()), samples=membership_samples))
    return report
