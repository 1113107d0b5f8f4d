"""
Penalization sweep: whole-space solves with weight e^{-V_alpha} compared on Omega
with the direct domain solve, along a decreasing alpha grid.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..core.constants import DEFAULT_MC_SAMPLES, PENALIZATION_REDUCTION, TENSOR_NODE_BUDGET, SolverMode
from ..core.errors import LabError
from ..core.model import TruncatedModel
from ..domains.base import ConvexDomain
from ..prox.potential import ConvexPotential
from ..solver.density import build_density
from ..solver.galerkin import GalerkinSolution, solve_problem
from .sobolev import SobolevReport, sobolev_report

logger = logging.getLogger(__name__)


@dataclass
class PenalizationSweep:
    """Distances ||u_alpha - u_Omega||_{L^2(Omega)} per alpha, with the per-alpha Sobolev reports."""
    alphas: List[float]
    distances: List[float]
    reports: List[SobolevReport]
    direct_report: Optional[SobolevReport] = None
    distance_stderr: List[float] = field(default_factory=list)

    @property
    def strictly_decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.distances, self.distances[1:]))

    @property
    def nonincreasing(self) -> bool:
        return all(b <= a for a, b in zip(self.distances, self.distances[1:]))

    @property
    def reduction(self) -> float:
        """Last distance over first distance (0 when the first is 0)."""
        first = self.distances[0]
        return self.distances[-1] / first if first > 0.0 else 0.0

    @property
    def empirical_rate(self) -> Optional[float]:
        """Least-squares slope of log(distance) against log(alpha); None with fewer than two positive distances."""
        pairs = [(a, d) for a, d in zip(self.alphas, self.distances) if d > 0.0]
        if len(pairs) < 2:
            return None
        logs = np.log(np.array(pairs))
        slope, _ = np.polyfit(logs[:, 0], logs[:, 1], 1)
        return float(slope)

    def meets_reduction(self, factor: float = PENALIZATION_REDUCTION) -> bool:
        return self.reduction <= factor

    def rows(self) -> List[List[float]]:
        """CSV rows: alpha, distance, ratio_u, ratio_grad, ratio_hess."""
        return [[a, d, r.ratio_u, r.ratio_grad, r.ratio_hess]
                for a, d, r in zip(self.alphas, self.distances, self.reports)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alphas": self.alphas,
            "distances": self.distances,
            "distance_stderr": self.distance_stderr,
            "empirical_rate": self.empirical_rate,
            "reduction": self.reduction,
            "strictly_decreasing": self.strictly_decreasing,
            "reports": [r.to_dict() for r in self.reports],
            "direct_report": self.direct_report.to_dict() if self.direct_report else None,
        }


def restricted_distance(penalized: GalerkinSolution, direct: GalerkinSolution):
    """(||u_alpha - u_Omega||, stderr) on the direct solve's rule and density."""
    rule = direct.system.rule
    weights = direct.density.values(rule.nodes)
    diff = penalized.expansion.value_batch(rule.nodes) - direct.expansion.value_batch(rule.nodes)
    estimate, stderr = rule.integrate_with_stderr(weights * diff ** 2)
    norm = math.sqrt(max(estimate, 0.0))
    return norm, (stderr / (2.0 * norm) if norm > 0.0 else 0.0)


def penalization_sweep(
    model: TruncatedModel,
    weight: ConvexPotential,
    domain: ConvexDomain,
    f,
    lam: float,
    alphas: Sequence[float],
    solver: Dict[str, Any],
) -> PenalizationSweep:
    """
    Solve the penalized problem for every alpha and compare with the direct solve on Omega.

    Args:
        solver: degree, quadrature {kind, resolution}, and optionally mc_samples,
            threads, exact (exact envelope of U instead of U itself) and node_budget.

    Raises:
        ValueError: alpha grid not strictly decreasing and positive.
        LabError: a per-alpha solve failed; the exception carries `alpha`.
    """
    alphas = [float(a) for a in alphas]
    if not alphas or any(a <= 0.0 for a in alphas) or any(b >= a for a, b in zip(alphas, alphas[1:])):
        raise ValueError(f"alpha grid must be positive and strictly decreasing, got {alphas}")
    degree = int(solver["degree"])
    quadrature = solver.get("quadrature", {})
    mc_samples = int(solver.get("mc_samples", DEFAULT_MC_SAMPLES))
    threads = max(1, int(solver.get("threads", 1)))
    exact = bool(solver.get("exact", False))
    node_budget = int(solver.get("node_budget", TENSOR_NODE_BUDGET))

    direct_density = build_density(SolverMode.DOMAIN_DIRECT, weight, domain)
    direct = solve_problem(model, direct_density, f, lam, degree, quadrature, mc_samples,
                           threads=threads, node_budget=node_budget)
    logger.info("direct domain solve on %s: %s", domain.kind.value, direct.diagnostics.get("method"))

    def run(alpha: float):
        try:
            density = build_density(SolverMode.WHOLE_SPACE_PENALIZED, weight, domain, alpha, exact)
            sol = solve_problem(model, density, f, lam, degree, quadrature, mc_samples,
                                threads=1, node_budget=node_budget)
        except LabError as exc:
            exc.alpha = alpha
            exc.args = (f"alpha={alpha:.6g}: {exc}",)
            raise
        distance, stderr = restricted_distance(sol, direct)
        logger.info("alpha=%.6g distance=%.6e", alpha, distance)
        return distance, stderr, sobolev_report(sol)

    if threads > 1 and len(alphas) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, alphas))
    else:
        results = [run(a) for a in alphas]

    sweep = PenalizationSweep(
        alphas=alphas,
        distances=[r[0] for r in results],
        reports=[r[2] for r in results],
        direct_report=sobolev_report(direct),
        distance_stderr=[r[1] for r in results],
    )
    if not sweep.nonincreasing:
        logger.warning("penalization distances are not monotone: %s", sweep.distances)
    return sweep
