"""
Shared command plumbing: config loading and validation, object construction from the
config blocks, and the execute() wrapper mapping outcomes to exit codes.

Exit codes: 0 every contract passed, 1 input error, 2 contract violation.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence

from ..config.settings import Settings, get_settings
from ..core.config import RunConfig, apply_overrides, read_config_file
from ..core.errors import ConfigValidationError, ContractViolation, LabError
from ..core.model import TruncatedModel
from ..domains.base import ConvexDomain
from ..domains.factory import build_domain
from ..prox.potential import ConvexPotential
from ..schemas.input import ConfigSchema
from ..schemas.output import RunSummary
from ..solver.rhs import Forcing, build_forcing
from ..weights.factory import build_weight
from .artifacts import ArtifactWriter

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_CONTRACT_VIOLATION = 2


def load_config(
    config_path: Optional[str] = None,
    overrides: Sequence[str] = (),
    settings: Optional[Settings] = None,
) -> RunConfig:
    """
    Read, override and validate a run configuration.

    `solver.mc_samples` falls back to the LAB_MC_SAMPLES setting when the file leaves it out.

    Raises:
        ConfigValidationError: every offending key, at once.
    """
    settings = settings or get_settings()
    try:
        data = read_config_file(config_path) if config_path else {}
        apply_overrides(data, overrides)
    except (OSError, ValueError) as e:
        raise ConfigValidationError([str(e)]) from e
    solver = data.get("solver")
    if isinstance(solver, dict) and "mc_samples" not in solver:
        solver["mc_samples"] = settings.compute.mc_samples
    elif solver is None:
        data["solver"] = {"mc_samples": settings.compute.mc_samples}

    is_valid, errors = ConfigSchema.validate(data)
    if not is_valid:
        raise ConfigValidationError(errors)
    return RunConfig.from_dict(data)


@dataclass
class Problem:
    """Objects built from a validated RunConfig."""
    model: TruncatedModel
    domain: Optional[ConvexDomain]
    weight: ConvexPotential
    forcing: Forcing


def build_problem(config: RunConfig) -> Problem:
    model = TruncatedModel(config.model.n, config.model.seed)
    return Problem(
        model=model,
        domain=build_domain(config.domain, model),
        weight=build_weight(config.weight, model),
        forcing=build_forcing(config.solver.rhs, model.n),
    )


class CommandHandler:
    """
    Base class of the command handlers.

    Subclasses implement `_run(summary, writer)`; contract failures go into
    `summary.violations` and turn into exit code 2 after the artifacts are written.
    """

    command = ""

    def __init__(
        self,
        config: Optional[RunConfig] = None,
        out_dir: Optional[str] = None,
        threads: Optional[int] = None,
        settings: Optional[Settings] = None,
    ):
        self.settings = settings or get_settings()
        self.config = config or RunConfig()
        self.out_dir = out_dir or self.config.output.directory
        self.threads = max(1, int(threads or self.settings.compute.threads))
        self.node_budget = self.settings.compute.tensor_node_budget

    def solver_dict(self) -> Dict[str, Any]:
        s = self.config.solver
        return {
            "degree": s.degree,
            "quadrature": dict(s.quadrature),
            "mc_samples": s.mc_samples,
            "threads": self.threads,
            "exact": self.config.weight.exact,
            "node_budget": self.node_budget,
        }

    def require_domain(self, problem: Problem) -> ConvexDomain:
        if problem.domain is None:
            raise ConfigValidationError([f"domain.kind: command '{self.command}' needs a domain"])
        return problem.domain

    def execute(self) -> Dict[str, Any]:
        """Run the command; never lets a LabError escape."""
        summary = RunSummary(self.command, self.config.to_dict())
        writer = ArtifactWriter(self.out_dir, self.config.output.formats)
        logger.info("running %s, output in %s", self.command, self.out_dir)
        try:
            self._run(summary, writer)
            if summary.violations:
                raise ContractViolation(summary.violations)
        except ContractViolation as e:
            data = writer.write_summary(summary)
            return {"success": False, "error": str(e), "exit_code": EXIT_CONTRACT_VIOLATION,
                    "violations": e.violations, "summary": data, "files": writer.files,
                    "out_dir": self.out_dir}
        except ConfigValidationError as e:
            return {"success": False, "error": str(e), "errors": e.errors, "exit_code": EXIT_INPUT_ERROR}
        except (LabError, ValueError) as e:
            logger.error("%s failed: %s", self.command, e)
            return {"success": False, "error": str(e), "exit_code": EXIT_INPUT_ERROR}
        data = writer.write_summary(summary)
        return {"success": True, "exit_code": EXIT_OK, "summary": data, "files": writer.files,
                "out_dir": self.out_dir}

    def _run(self, summary: RunSummary, writer: ArtifactWriter) -> None:
        raise NotImplementedError

    @staticmethod
    def record(summary: RunSummary, number: int, passed: bool,
               violations: Sequence[Dict[str, Any]] = (), **details) -> bool:
        """Add a criterion outcome; a failure always leaves at least one violation record."""
        summary.add(number, passed, **details)
        if not passed:
            found = [dict(v, acceptance=number) for v in violations]
            summary.violations.extend(found or [{"criterion": f"criterion-{number}", "acceptance": number}])
        return bool(passed)

    def format_output(self, result: Dict[str, Any]) -> str:
        """Format result for console output."""
        if not result.get("success") and "summary" not in result:
            errors = result.get("errors")
            if not errors:
                return f"ERROR: {result.get('error', 'Unknown error')}"
            return "\n".join(["ERROR: invalid configuration"] + [f"  {e}" for e in errors])

        summary = result["summary"]
        lines = [
            "───────────────────────────────────────────────────────────────",
            f"  {self.command.upper()}",
            "───────────────────────────────────────────────────────────────",
        ]
        for number, entry in summary["criteria"].items():
            status = "PASS" if entry["passed"] else "FAIL"
            lines.append(f"  [{status}] {number}. {entry['name']}")
        for name, value in self._headline(summary).items():
            lines.append(f"  {name}: {value}")
        if result.get("violations"):
            lines.append("")
            lines.append("  VIOLATIONS:")
            for v in result["violations"]:
                lines.append(f"    • {v.get('criterion')}: value={v.get('value')} limit={v.get('limit')}")
        lines.extend([
            "───────────────────────────────────────────────────────────────",
            f"  Artifacts in: {result['out_dir']} ({', '.join(result['files']) or 'summary only'})",
            "───────────────────────────────────────────────────────────────",
        ])
        return "\n".join(lines)

    def _headline(self, summary: Dict[str, Any]) -> Dict[str, Any]:
        return {}
