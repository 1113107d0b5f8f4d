"""
Output schemas - run summary written as summary.json next to the CSV tables.
Pass/fail entries are keyed by acceptance-criterion number.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

CRITERIA: Dict[int, str] = {
    1: "spectrum identities",
    2: "Ornstein-Uhlenbeck resolvent oracle",
    3: "regularity bounds",
    4: "Moreau-Yosida property suite",
    5: "projection property suite",
    6: "penalization convergence",
    7: "Neumann condition",
    8: "integration by parts with traces",
    9: "determinism",
}


@dataclass
class CriterionResult:
    """Outcome of one numbered criterion within a run."""
    number: int
    passed: bool
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def name(self) -> str:
        return CRITERIA[self.number]

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "passed": self.passed, **self.details}


@dataclass
class RunSummary:
    """Everything a command reports besides its CSV tables."""
    command: str
    config: Dict[str, Any]
    criteria: List[CriterionResult] = field(default_factory=list)
    violations: List[Dict[str, Any]] = field(default_factory=list)
    results: Dict[str, Any] = field(default_factory=dict)
    artifacts: Dict[str, str] = field(default_factory=dict)   # file name -> sha256

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.criteria) and not self.violations

    def add(self, number: int, passed: bool, **details) -> CriterionResult:
        result = CriterionResult(number, bool(passed), details)
        self.criteria.append(result)
        return result

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "passed": self.passed,
            "criteria": {str(c.number): c.to_dict() for c in self.criteria},
            "violations": self.violations,
            "results": self.results,
            "artifacts": dict(sorted(self.artifacts.items())),
            "config": self.config,
        }


class SummarySchema:
    """Shape of summary.json."""

    SCHEMA = {
        "type": "object",
        "required": ["command", "passed", "criteria", "violations", "results", "artifacts", "config"],
        "properties": {
            "command": {"type": "string"},
            "passed": {"type": "boolean"},
            "criteria": {"type": "object"},
            "violations": {"type": "array"},
            "results": {"type": "object"},
            "artifacts": {"type": "object"},
            "config": {"type": "object"},
        },
    }

    _TYPES = {"string": str, "boolean": bool, "object": dict, "array": list}

    @classmethod
    def validate(cls, data: Dict[str, Any]) -> Tuple[bool, List[str]]:
        errors = []
        for key in cls.SCHEMA["required"]:
            if key not in data:
                errors.append(f"Missing required field: {key}")
                continue
            expected = cls._TYPES[cls.SCHEMA["properties"][key]["type"]]
            if not isinstance(data[key], expected):
                errors.append(f"{key} must be of type {cls.SCHEMA['properties'][key]['type']}")
        for number, entry in (data.get("criteria") or {}).items():
            if not number.isdigit() or int(number) not in CRITERIA:
                errors.append(f"criteria: unknown criterion '{number}'")
            elif not isinstance(entry, dict) or not isinstance(entry.get("passed"), bool):
                errors.append(f"criteria.{number}: needs a boolean 'passed'")
        return len(errors) == 0, errors


def get_summary_template(command: str, config: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Empty summary for a command."""
    return RunSummary(command, config or {}).to_dict()


def criterion_result_from_dict(number: int, data: Dict[str, Any]) -> CriterionResult:
    details = {k: v for k, v in data.items() if k not in ("name", "passed")}
    return CriterionResult(number, bool(data["passed"]), details)


__all__ = [
    "CRITERIA",
    "CriterionResult",
    "RunSummary",
    "SummarySchema",
    "get_summary_template",
    "criterion_result_from_dict",
]
