"""
Error hierarchy for the laboratory.
Every class also derives from the matching builtin so callers can catch either.
"""

from typing import Any, List, Optional, Sequence, Tuple


class LabError(Exception):
    """Base class of all laboratory errors."""


class IndexRangeError(LabError, IndexError):
    """Basis index outside 1..n."""

    def __init__(self, name: str, value: int, upper: int):
        self.name = name
        self.value = value
        self.upper = upper
        super().__init__(f"{name}={value} outside valid range 1..{upper}")


class NodeBudgetError(LabError, MemoryError):
    """Tensor rule would exceed the configured node budget."""

    def __init__(self, nodes: int, budget: int):
        self.nodes = nodes
        self.budget = budget
        super().__init__(
            f"tensor rule needs {nodes} nodes, budget is {budget}; "
            f"use quadrature kind 'monte-carlo' instead"
        )


class ConfigValidationError(LabError, ValueError):
    """Configuration failed schema validation; carries every offending key."""

    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class ProjectionConvergenceError(LabError, RuntimeError):
    """Multiplier search for a projection hit the iteration limit."""

    def __init__(self, iterations: int, bracket: Tuple[float, float], residual: float):
        self.iterations = iterations
        self.bracket = bracket
        self.residual = residual
        super().__init__(
            f"projection multiplier search stopped after {iterations} iterations, "
            f"bracket=[{bracket[0]:.6g}, {bracket[1]:.6g}], residual={residual:.3e}"
        )


class ProxConvergenceError(LabError, RuntimeError):
    """Inner Moreau-Yosida problem did not reach the tolerance."""

    def __init__(self, iterations: int, best_iterate: Any, residual: float):
        self.iterations = iterations
        self.best_iterate = best_iterate
        self.residual = residual
        super().__init__(
            f"prox solver stopped after {iterations} iterations with gradient residual {residual:.3e}"
        )


class NonFiniteValueError(LabError, ArithmeticError):
    """A non-finite value showed up where a finite one is required."""

    def __init__(self, what: str, node: Optional[Any] = None):
        self.what = what
        self.node = node
        where = f" at node {node}" if node is not None else ""
        super().__init__(f"non-finite {what}{where}")


class AssemblyConsistencyError(LabError, ArithmeticError):
    """Assembled lambda*M + A is not positive definite."""


class ConditioningError(LabError, ArithmeticError):
    """Symmetric factorisation failed."""

    def __init__(self, message: str, pivot_report: Optional[dict] = None):
        self.pivot_report = pivot_report or {}
        super().__init__(message)


class CapabilityError(LabError, NotImplementedError):
    """Requested operation is not available for this object."""


class GrowthCertificateError(LabError, ValueError):
    """Declared growth bound of a weight is violated."""

    def __init__(self, worst_s: float, ratio: float):
        self.worst_s = worst_s
        self.ratio = ratio
        super().__init__(f"growth certificate violated at s={worst_s:.6g} (ratio {ratio:.6g})")


class ContractViolation(LabError, AssertionError):
    """One or more verification contracts failed."""

    def __init__(self, violations: List[dict]):
        self.violations = violations
        names = ", ".join(v.get("criterion", "?") for v in violations)
        super().__init__(f"contract violations: {names}")


class MeasureMismatchError(LabError, ValueError):
    """A report was requested against a measure other than the one the solution lives on."""
