"""
neumann-check and ibp-check handlers - statements about boundary traces.

Artifacts: neumann.csv (degree, residual), ibp.csv (config_id, lhs, rhs, abs_diff, stderr).
"""

import logging
import math
from typing import Any, Dict, List

from ..core.constants import IBP_CLOSED_FORM_TOL, NEUMANN_REDUCTION, Command, WeightKind
from ..domains.halfspace import HalfspaceDomain
from ..schemas.output import RunSummary
from ..solver.hermite import hermite_function
from ..verify.ibp import IbpResult, ibp_check, ibp_random_cases
from ..verify.neumann import neumann_series
from .artifacts import ArtifactWriter
from .base import CommandHandler, build_problem

logger = logging.getLogger(__name__)

INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


class NeumannCheckHandler(CommandHandler):
    """Handles `neumann-check` (acceptance entry 7): direct solves along verify.degrees."""

    command = Command.NEUMANN_CHECK.value

    def _run(self, summary: RunSummary, writer: ArtifactWriter) -> None:
        cfg = self.config
        problem = build_problem(cfg)
        domain = self.require_domain(problem)
        report = neumann_series(problem.model, problem.weight, domain, problem.forcing, cfg.solver.lam,
                                cfg.verify.degrees, cfg.solver.quadrature, cfg.verify.boundary_resolution,
                                cfg.solver.mc_samples, threads=self.threads, node_budget=self.node_budget)
        writer.write_csv("neumann.csv", ["degree", "residual"], report.rows())

        violations = []
        if not report.nonincreasing:
            violations.append({"criterion": "residual_nonincreasing", "value": report.residuals,
                               "limit": "nonincreasing"})
        if not report.meets_reduction(NEUMANN_REDUCTION):
            violations.append({"criterion": "residual_reduction", "value": report.residuals[-1],
                               "limit": NEUMANN_REDUCTION * report.residuals[0]})
        self.record(summary, 7, not violations, violations, residuals=report.residuals)
        summary.results["neumann"] = report.to_dict()

    def _headline(self, summary: Dict[str, Any]) -> Dict[str, Any]:
        series = summary["results"]["neumann"]["degree_series"]
        return {f"degree {d}": f"{r:.6e}" for d, r in series}


class IbpCheckHandler(CommandHandler):
    """
    Handles `ibp-check` (acceptance entry 8): randomised (phi, k) pairs and, on the
    half-line with U = 0, the closed-form case phi = 1 where both sides are (2 pi)^{-1/2}.
    """

    command = Command.IBP_CHECK.value

    def _run(self, summary: RunSummary, writer: ArtifactWriter) -> None:
        cfg = self.config
        problem = build_problem(cfg)
        domain = self.require_domain(problem)
        resolution = cfg.verify.resolution or cfg.solver.quadrature.get("resolution", 16)
        label = f"{domain.kind.value}-n{problem.model.n}"
        results: List[IbpResult] = []
        violations = []

        half_line = (problem.model.n == 1 and isinstance(domain, HalfspaceDomain)
                     and domain.a[0] > 0.0 and domain.c == 0.0 and cfg.weight.kind == WeightKind.ZERO.value)
        if half_line:
            closed = ibp_check(problem.model, problem.weight, domain, hermite_function(1, [0]), 1,
                               resolution=resolution, boundary_resolution=cfg.verify.boundary_resolution,
                               mc_samples=cfg.solver.mc_samples, config_id=f"{label}-closed-form")
            results.append(closed)
            worst = max(abs(closed.lhs - INV_SQRT_2PI), abs(closed.rhs - INV_SQRT_2PI))
            if worst > IBP_CLOSED_FORM_TOL:
                violations.append({"criterion": "closed_form", "value": worst, "limit": IBP_CLOSED_FORM_TOL})

        cases = ibp_random_cases(problem.model, problem.weight, domain, cfg.verify.ibp_cases,
                                 cfg.verify.boundary_resolution, resolution, cfg.solver.mc_samples, label=label)
        results.extend(cases)
        for r in cases:
            if not r.passed(multiplier=cfg.verify.stderr_multiplier):
                violations.append({"criterion": r.config_id, "value": r.abs_diff,
                                   "limit": r.tolerance(multiplier=cfg.verify.stderr_multiplier)})

        writer.write_csv("ibp.csv", ["config_id", "lhs", "rhs", "abs_diff", "stderr"], [r.row() for r in results])
        self.record(summary, 8, not violations, violations, cases=len(results),
                    worst_abs_diff=max((r.abs_diff for r in results), default=0.0))
        summary.results["ibp"] = [r.to_dict() for r in results]

    def _headline(self, summary: Dict[str, Any]) -> Dict[str, Any]:
        entry = summary["criteria"]["8"]
        return {"cases": entry["cases"], "worst |lhs - rhs|": f"{entry['worst_abs_diff']:.3e}"}
