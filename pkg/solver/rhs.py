"""
Forcing terms f for lambda u - L u = f.
"""

from typing import Any, Callable, Dict, Optional, Sequence

import numpy as np

from ..core.constants import RhsKind
from .hermite import hermite_table


class Forcing:
    """Callable on point batches (N, n) -> (N,)."""

    name = "forcing"

    def values(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, X: np.ndarray) -> np.ndarray:
        return self.values(np.atleast_2d(np.asarray(X, dtype=float)))

    def describe(self) -> Dict[str, Any]:
        return {"kind": self.name}


class HermiteForcing(Forcing):
    """f = h_{k_1}(x_1) ... h_{k_n}(x_n) (orthonormal, unit Gaussian L^2 norm)."""

    name = "hermite"

    def __init__(self, multi_index: Sequence[int], n: Optional[int] = None):
        index = [int(k) for k in multi_index]
        if any(k < 0 for k in index):
            raise ValueError(f"Hermite multi-index must be nonnegative, got {index}")
        if n is not None:
            if len(index) > n:
                raise ValueError(f"multi-index {index} longer than dimension {n}")
            index = index + [0] * (n - len(index))
        self.multi_index = tuple(index)

    @property
    def total_degree(self) -> int:
        return sum(self.multi_index)

    def values(self, X):
        degree = max(self.multi_index) if self.multi_index else 0
        table = hermite_table(X[:, :len(self.multi_index)], degree)
        out = np.ones(X.shape[0])
        for a, k in enumerate(self.multi_index):
            out = out * table[:, a, k]
        return out

    def describe(self):
        return {"kind": self.name, "index": list(self.multi_index)}


class ConstantForcing(Forcing):
    """f = value."""

    name = "constant"

    def __init__(self, value: float = 1.0):
        self.value = float(value)

    def values(self, X):
        return np.full(X.shape[0], self.value)

    def describe(self):
        return {"kind": self.name, "value": self.value}


class LinearForcing(Forcing):
    """f = <b, x> + c."""

    name = "linear"

    def __init__(self, b: Sequence[float], c: float = 0.0):
        self.b = np.asarray(b, dtype=float).ravel()
        self.c = float(c)

    def values(self, X):
        return X @ self.b + self.c

    def describe(self):
        return {"kind": self.name, "b": self.b.tolist(), "c": self.c}


class CallableForcing(Forcing):
    """Wrap a vectorised callable."""

    name = "callable"

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray], name: str = "callable"):
        self.fn = fn
        self.name = name

    def values(self, X):
        return np.asarray(self.fn(X), dtype=float).reshape(X.shape[0])


def as_forcing(f) -> Forcing:
    return f if isinstance(f, Forcing) else CallableForcing(f)


def build_forcing(block: Dict[str, Any], n: int) -> Forcing:
    """Forcing from the `solver.rhs` config block."""
    kind = RhsKind(block.get("kind", RhsKind.HERMITE.value))
    if kind == RhsKind.HERMITE:
        return HermiteForcing(block.get("index", [1]), n)
    if kind == RhsKind.CONSTANT:
        return ConstantForcing(block.get("value", 1.0))
    b = block.get("b")
    if b is None:
        b = [1.0] + [0.0] * (n - 1)
    if len(b) != n:
        raise ValueError(f"linear forcing needs {n} coefficients, got {len(b)}")
    return LinearForcing(b, block.get("c", 0.0))
