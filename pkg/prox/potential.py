"""
Convex potentials U: R^n -> R with H-gradient (the coordinate gradient in KL
coordinates) and optional Hessian.
"""

import logging
from typing import Callable, Optional

import numpy as np

from ..core.constants import FD_STEP
from ..core.errors import CapabilityError

logger = logging.getLogger(__name__)

ValueFn = Callable[[np.ndarray], float]
GradFn = Callable[[np.ndarray], np.ndarray]


class ConvexPotential:
    """
    Finite differentiable convex potential.

    Built from callables, or subclassed with closed forms. `convexity_declared` is the
    caller's claim; `convexity_probe` spot-checks it.
    """

    name = "potential"

    def __init__(
        self,
        value: ValueFn,
        gradient: GradFn,
        hessian: Optional[Callable[[np.ndarray], np.ndarray]] = None,
        convexity_declared: bool = True,
        name: Optional[str] = None,
    ):
        self._value = value
        self._gradient = gradient
        self._hessian = hessian
        self.convexity_declared = convexity_declared
        if name:
            self.name = name

    def value(self, x: np.ndarray) -> float:
        return float(self._value(np.asarray(x, dtype=float)))

    def gradient(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self._gradient(np.asarray(x, dtype=float)), dtype=float)

    @property
    def has_hessian(self) -> bool:
        return self._hessian is not None

    def hessian(self, x: np.ndarray) -> np.ndarray:
        if self._hessian is None:
            raise CapabilityError(f"potential '{self.name}' has no Hessian")
        return np.asarray(self._hessian(np.asarray(x, dtype=float)), dtype=float)

    def value_batch(self, X: np.ndarray) -> np.ndarray:
        return np.array([self.value(x) for x in np.atleast_2d(X)])

    def gradient_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        return np.array([self.gradient(x) for x in X]).reshape(X.shape)

    def evaluate(self, x: np.ndarray):
        """(value, gradient) pair."""
        return self.value(x), self.gradient(x)

    def closed_form_prox(self, x: np.ndarray, alpha: float) -> Optional[np.ndarray]:
        """Minimizer of U(x + h) + |h|^2/(2 alpha) when known in closed form."""
        return None

    # ------------------------------------------------------------------
    # probes
    # ------------------------------------------------------------------

    def convexity_probe(self, rng: np.random.Generator, n: int, count: int = 100,
                        scale: float = 2.0) -> float:
        """max over random pairs of U((x+y)/2) - (U(x) + U(y))/2; <= 0 for convex U."""
        worst = -np.inf
        for _ in range(count):
            x = scale * rng.standard_normal(n)
            y = scale * rng.standard_normal(n)
            gap = self.value(0.5 * (x + y)) - 0.5 * (self.value(x) + self.value(y))
            worst = max(worst, gap)
        return float(worst)

    def gradient_probe(self, rng: np.random.Generator, n: int, count: int = 100,
                       scale: float = 1.0, step: float = FD_STEP) -> float:
        """Worst error of the gradient against central differences, relative to max(1, |grad|)."""
        worst = 0.0
        for _ in range(count):
            x = scale * rng.standard_normal(n)
            grad = self.gradient(x)
            fd = central_difference(self.value, x, step)
            worst = max(worst, float(np.linalg.norm(grad - fd)) / max(1.0, float(np.linalg.norm(grad))))
        return worst

    def describe(self) -> dict:
        return {"name": self.name, "hessian": self.has_hessian}


def central_difference(fn: ValueFn, x: np.ndarray, step: float = FD_STEP) -> np.ndarray:
    """Two-sided finite-difference gradient of a scalar function."""
    x = np.asarray(x, dtype=float)
    grad = np.empty_like(x)
    for k in range(x.shape[0]):
        e = np.zeros_like(x)
        e[k] = step
        grad[k] = (fn(x + e) - fn(x - e)) / (2.0 * step)
    return grad


# =============================================================================
# CLOSED-FORM POTENTIALS
# =============================================================================

class ConstantPotential(ConvexPotential):
    """U = kappa."""

    name = "constant"

    def __init__(self, kappa: float = 0.0):
        self.kappa = float(kappa)
        self.convexity_declared = True

    def value(self, x):
        return self.kappa

    def gradient(self, x):
        return np.zeros(np.asarray(x).shape[-1])

    @property
    def has_hessian(self):
        return True

    def hessian(self, x):
        n = np.asarray(x).shape[-1]
        return np.zeros((n, n))

    def value_batch(self, X):
        return np.full(np.atleast_2d(X).shape[0], self.kappa)

    def gradient_batch(self, X):
        return np.zeros_like(np.atleast_2d(X), dtype=float)

    def closed_form_prox(self, x, alpha):
        return np.zeros(np.asarray(x).shape[-1])


class ZeroPotential(ConstantPotential):
    """U = 0: plain Gaussian measure."""

    name = "zero"

    def __init__(self):
        super().__init__(0.0)


class LinearPotential(ConvexPotential):
    """U = <b, x>; prox minimizer -alpha b."""

    name = "linear"

    def __init__(self, b):
        self.b = np.asarray(b, dtype=float).ravel()
        self.convexity_declared = True

    def value(self, x):
        return float(self.b @ np.asarray(x, dtype=float))

    def gradient(self, x):
        return self.b.copy()

    @property
    def has_hessian(self):
        return True

    def hessian(self, x):
        return np.zeros((self.b.size, self.b.size))

    def value_batch(self, X):
        return np.atleast_2d(X) @ self.b

    def gradient_batch(self, X):
        return np.tile(self.b, (np.atleast_2d(X).shape[0], 1))

    def closed_form_prox(self, x, alpha):
        return -alpha * self.b


class QuadraticPotential(ConvexPotential):
    """
    U = <x, Q x>/2 with Q symmetric positive semidefinite (a scalar means Q = curvature * I).

    Prox minimizer: -alpha (I + alpha Q)^{-1} Q x.
    """

    name = "quadratic"

    def __init__(self, curvature=1.0, n: Optional[int] = None):
        q = np.asarray(curvature, dtype=float)
        if q.ndim == 0:
            if n is None:
                self.scalar = float(q)
                self.matrix = None
            else:
                self.scalar = None
                self.matrix = float(q) * np.eye(n)
        else:
            if q.shape[0] != q.shape[1] or not np.allclose(q, q.T):
                raise ValueError("quadratic curvature must be a symmetric matrix")
            if np.linalg.eigvalsh(q).min() < -1e-12:
                raise ValueError("quadratic curvature must be positive semidefinite")
            self.scalar = None
            self.matrix = q
        if self.scalar is not None and self.scalar < 0.0:
            raise ValueError("quadratic curvature must be nonnegative")
        self.convexity_declared = True

    def _apply(self, x):
        return self.scalar * x if self.matrix is None else x @ self.matrix

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return 0.5 * float(x @ self._apply(x))

    def gradient(self, x):
        return self._apply(np.asarray(x, dtype=float))

    @property
    def has_hessian(self):
        return True

    def hessian(self, x):
        n = np.asarray(x).shape[-1]
        return self.scalar * np.eye(n) if self.matrix is None else self.matrix.copy()

    def value_batch(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return 0.5 * np.einsum("ij,ij->i", X, self._apply(X))

    def gradient_batch(self, X):
        return self._apply(np.atleast_2d(np.asarray(X, dtype=float)))

    def closed_form_prox(self, x, alpha):
        x = np.asarray(x, dtype=float)
        if self.matrix is None:
            return -alpha * self.scalar * x / (1.0 + alpha * self.scalar)
        n = x.shape[0]
        return -alpha * np.linalg.solve(np.eye(n) + alpha * self.matrix, self.matrix @ x)
