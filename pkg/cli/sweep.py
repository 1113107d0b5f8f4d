"""
penalize-sweep handler - whole-space penalized solves against the direct domain solve.

Artifacts: penalization.csv (alpha, distance, ratio_u, ratio_grad, ratio_hess) and,
for the one-dimensional reference problem, oracle.csv (quantity, value).
"""

import logging
from typing import Any, Dict, Optional

import numpy as np

from ..core.constants import PENALIZATION_REDUCTION, PENALIZATION_ZERO_TOL, Command, SolverMode, WeightKind
from ..domains.halfspace import HalfspaceDomain
from ..schemas.output import RunSummary
from ..solver.density import build_density
from ..solver.galerkin import solve_problem
from ..solver.rhs import HermiteForcing
from ..verify.oracle import OracleComparison, compare_with_oracles
from ..verify.penalization import penalization_sweep
from .artifacts import ArtifactWriter
from .base import CommandHandler, Problem, build_problem

logger = logging.getLogger(__name__)


def is_reference_half_line(problem: Problem, weight_kind: str, lam: float) -> bool:
    """n = 1, Omega = (-inf, 0], U = 0, f = He_1, lambda = 1."""
    domain = problem.domain
    return (problem.model.n == 1
            and isinstance(domain, HalfspaceDomain) and domain.a[0] > 0.0 and domain.c == 0.0
            and weight_kind == WeightKind.ZERO.value
            and isinstance(problem.forcing, HermiteForcing) and problem.forcing.multi_index == (1,)
            and lam == 1.0)


class PenalizeSweepHandler(CommandHandler):
    """
    Handles the `penalize-sweep` command (acceptance entry 6).

    Distances must not increase along the alpha grid. For the one-dimensional reference
    problem they must also decrease strictly, shrink by PENALIZATION_REDUCTION and the
    direct solve must match the reflected finite-difference oracle.
    """

    command = Command.PENALIZE_SWEEP.value

    def _run(self, summary: RunSummary, writer: ArtifactWriter) -> None:
        cfg = self.config
        problem = build_problem(cfg)
        domain = self.require_domain(problem)
        sweep = penalization_sweep(problem.model, problem.weight, domain, problem.forcing,
                                   cfg.solver.lam, cfg.verify.alphas, self.solver_dict())
        writer.write_csv("penalization.csv", ["alpha", "distance", "ratio_u", "ratio_grad", "ratio_hess"],
                         sweep.rows())

        violations = []
        trivial = max(sweep.distances) <= PENALIZATION_ZERO_TOL
        if not trivial and not sweep.nonincreasing:
            violations.append({"criterion": "distances_nonincreasing", "value": sweep.distances,
                               "limit": "nonincreasing"})

        oracle: Optional[OracleComparison] = None
        if not trivial and is_reference_half_line(problem, cfg.weight.kind, cfg.solver.lam):
            if not sweep.strictly_decreasing:
                violations.append({"criterion": "distances_strictly_decreasing", "value": sweep.distances,
                                   "limit": "strictly decreasing"})
            if not sweep.meets_reduction(PENALIZATION_REDUCTION):
                violations.append({"criterion": "distance_reduction", "value": sweep.reduction,
                                   "limit": PENALIZATION_REDUCTION})
            oracle = self._oracle(problem)
            writer.write_csv("oracle.csv", ["quantity", "value"], sorted(oracle.to_dict().items()))
            if not oracle.passed:
                violations.append({"criterion": "direct_vs_finite_difference", "value": oracle.candidate_vs_fd,
                                   "limit": oracle.tolerance})

        self.record(summary, 6, not violations, violations, distances=sweep.distances,
                    reduction=sweep.reduction, trivial=trivial, oracle_checked=oracle is not None)
        summary.results.update(sweep=sweep.to_dict(), oracle=oracle.to_dict() if oracle else None)

    def _oracle(self, problem: Problem) -> OracleComparison:
        cfg = self.config
        density = build_density(SolverMode.DOMAIN_DIRECT, problem.weight, problem.domain)
        direct = solve_problem(problem.model, density, problem.forcing, cfg.solver.lam, cfg.solver.degree,
                               cfg.solver.quadrature, cfg.solver.mc_samples, threads=self.threads,
                               node_budget=self.node_budget)
        expansion = direct.expansion
        comparison = compare_with_oracles(
            lambda x: expansion.value_batch(np.asarray(x, dtype=float).reshape(-1, 1)),
            lambda x: expansion.gradient_batch(np.asarray(x, dtype=float).reshape(-1, 1))[:, 0],
        )
        logger.info("direct solve vs finite-difference oracle: %.3e", comparison.candidate_vs_fd)
        return comparison

    def _headline(self, summary: Dict[str, Any]) -> Dict[str, Any]:
        sweep = summary["results"]["sweep"]
        rate = sweep["empirical_rate"]
        return {
            "distances": ", ".join(f"{d:.3e}" for d in sweep["distances"]),
            "empirical rate": f"{rate:.3f}" if rate is not None else "n/a",
        }
