"""
identities handler - closed-form sums of the Brownian covariance spectrum.

Artifact: identities.csv (name, K, partial, tail_bound, target, gap).
"""

import math
from typing import Any, Dict

from ..core.constants import FIRST_EIGENVALUE_RTOL, LAMBDA_SQUARED_SUM, LAMBDA_SQUARED_SUM_TOL, Command
from ..core.model import kl_eigenvalue
from ..schemas.output import RunSummary
from ..verify.identities import identities
from .artifacts import ArtifactWriter
from .base import CommandHandler


class IdentitiesHandler(CommandHandler):
    """Handles `identities` (acceptance entry 1) at truncation verify.identity_k."""

    command = Command.IDENTITIES.value

    def _run(self, summary: RunSummary, writer: ArtifactWriter) -> None:
        K = self.config.verify.identity_k
        reports = identities(K)
        writer.write_csv("identities.csv", ["name", "K", "partial", "tail_bound", "target", "gap"],
                         [[r.name, r.K, r.partial, r.tail_bound, r.target, r.gap] for r in reports.values()])

        violations = []
        first = kl_eigenvalue(1)
        expected = 4.0 / math.pi ** 2
        if abs(first - expected) > FIRST_EIGENVALUE_RTOL * expected:
            violations.append({"criterion": "first_eigenvalue", "value": first, "limit": expected})
        for report in reports.values():
            if not report.consistent:
                violations.append({"criterion": report.name, "value": report.partial, "limit": report.target})
        squares = reports["lambda_squared_sum"]
        # tail bound drops below 6e-7 from K = 100 on
        if K >= 100 and abs(squares.partial - LAMBDA_SQUARED_SUM) > LAMBDA_SQUARED_SUM_TOL:
            violations.append({"criterion": "lambda_squared_sum_window", "value": squares.partial,
                               "limit": LAMBDA_SQUARED_SUM_TOL})

        self.record(summary, 1, not violations, violations, first_eigenvalue=first,
                    lambda_squared_sum=squares.partial, K=K)
        summary.results["identities"] = {name: r.to_dict() for name, r in reports.items()}

    def _headline(self, summary: Dict[str, Any]) -> Dict[str, Any]:
        entry = summary["criteria"]["1"]
        return {
            "lambda_1": f"{entry['first_eigenvalue']:.15g}",
            f"sum lambda_k^2 (K={entry['K']})": f"{entry['lambda_squared_sum']:.15g}",
        }
