"""
prox-check and project-check handlers - randomised property suites.

Artifacts: prox_checks.csv / projection_checks.csv (check, worst, limit, passed).
"""

from typing import Any, Dict

from ..core.constants import CONVEXITY_SLACK, FD_STEP, GRADIENT_PROBE_TOL, Command, QuadratureKind
from ..core.quadrature import build_quadrature
from ..domains.factory import nondegeneracy_report
from ..schemas.output import RunSummary
from ..verify.suites import CheckResult, SuiteReport, projection_suite, prox_suite
from .artifacts import ArtifactWriter
from .base import CommandHandler, build_problem

SUITE_HEADER = ["check", "worst", "limit", "passed"]


class _SuiteHandler(CommandHandler):

    def _headline(self, summary: Dict[str, Any]) -> Dict[str, Any]:
        suite = summary["results"]["suite"]
        failed = [c["name"] for c in suite["checks"] if not c["passed"]]
        return {"checks": len(suite["checks"]), "failed": ", ".join(failed) or "none"}


class ProxCheckHandler(_SuiteHandler):
    """Handles `prox-check` (acceptance entry 4) on the configured weight."""

    command = Command.PROX_CHECK.value

    def _run(self, summary: RunSummary, writer: ArtifactWriter) -> None:
        cfg = self.config
        problem = build_problem(cfg)
        n = problem.model.n
        rng = problem.model.sampler(4)
        report = prox_suite(problem.weight, n, rng, cases=cfg.verify.prox_cases)

        # the weight itself has to be an admissible convex potential
        convexity = problem.weight.convexity_probe(rng, n)
        gradient = problem.weight.gradient_probe(rng, n, step=FD_STEP)
        report.checks.extend([
            _probe("weight_midpoint_convexity", convexity, CONVEXITY_SLACK),
            _probe("weight_gradient_formula", gradient, GRADIENT_PROBE_TOL),
        ])
        writer.write_csv("prox_checks.csv", SUITE_HEADER, report.rows())
        self.record(summary, 4, report.passed, report.failures(), weight=problem.weight.name)
        summary.results["suite"] = report.to_dict()


class ProjectCheckHandler(_SuiteHandler):
    """Handles `project-check` (acceptance entry 5) on the configured domain."""

    command = Command.PROJECT_CHECK.value

    def _run(self, summary: RunSummary, writer: ArtifactWriter) -> None:
        cfg = self.config
        problem = build_problem(cfg)
        domain = self.require_domain(problem)
        report: SuiteReport = projection_suite(domain, problem.model.sampler(5), cases=cfg.verify.projection_cases,
                                               membership_samples=cfg.verify.membership_samples)
        writer.write_csv("projection_checks.csv", SUITE_HEADER, report.rows())
        self.record(summary, 5, report.passed, report.failures(), domain=domain.kind.value)
        summary.results["suite"] = report.to_dict()
        rule = build_quadrature(problem.model, QuadratureKind.MONTE_CARLO, cfg.solver.mc_samples, stream=6)
        summary.results["nondegeneracy"] = nondegeneracy_report(domain, rule).to_dict()


def _probe(name: str, worst: float, limit: float) -> CheckResult:
    return CheckResult(name, float(worst), float(limit), bool(worst <= limit))
