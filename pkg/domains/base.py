"""
Convex sublevel domains Omega = G^{-1}(-inf, 0] and the H-projection onto them.

In truncated coordinates the H-distance is the Euclidean distance, the offset
m(x, Omega) = x - p(x) is the minimal-norm shift carrying x into Omega, and

    grad d^2(., Omega)(x) = 2 m(x, Omega).
"""

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Tuple

import numpy as np

from ..core.constants import MEMBERSHIP_TOL, VI_SAMPLES, DomainKind
from ..core.errors import CapabilityError
from ..core.model import TruncatedModel
from ..core.quadrature import QuadratureRule, build_quadrature, masked_monte_carlo_rule

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProjectionResult:
    """Nearest point of Omega and the offset m = x - point."""
    point: np.ndarray
    offset: np.ndarray
    distance: float
    iterations: int = 0
    vi_residual: Optional[float] = None

    def to_dict(self):
        return {
            "point": self.point.tolist(),
            "offset": self.offset.tolist(),
            "distance": self.distance,
            "iterations": self.iterations,
            "vi_residual": self.vi_residual,
        }


class ConvexDomain:
    """
    Closed convex domain given by a defining function G with gradient and Hessian,
    plus a projector returning the nearest point of {G <= 0}.

    Subclasses override the geometric methods with closed forms; the generic
    domain wraps user callables.
    """

    kind = DomainKind.GENERIC

    def __init__(
        self,
        n: int,
        g_value: Callable[[np.ndarray], float],
        g_grad: Callable[[np.ndarray], np.ndarray],
        g_hess: Callable[[np.ndarray], np.ndarray],
        projector: Callable[[np.ndarray], np.ndarray],
        test_points: Optional[Iterable[np.ndarray]] = None,
        name: str = "generic",
    ):
        self.n = int(n)
        self.name = name
        self._g_value = g_value
        self._g_grad = g_grad
        self._g_hess = g_hess
        self._projector = projector
        if test_points is not None:
            for point in test_points:
                if np.linalg.norm(self._g_grad(np.asarray(point, dtype=float))) == 0.0:
                    raise ValueError(f"grad G vanishes at test point {point}")

    @classmethod
    def whole_space(cls, n: int) -> "WholeSpaceDomain":
        return WholeSpaceDomain(n)

    # ------------------------------------------------------------------
    # defining function
    # ------------------------------------------------------------------

    def g_value(self, x: np.ndarray) -> float:
        return float(self._g_value(self._as_point(x)))

    def g_grad(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self._g_grad(self._as_point(x)), dtype=float)

    def g_hess(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self._g_hess(self._as_point(x)), dtype=float)

    def g_value_batch(self, X: np.ndarray) -> np.ndarray:
        return np.array([self.g_value(x) for x in np.atleast_2d(X)])

    def g_grad_batch(self, X: np.ndarray) -> np.ndarray:
        return np.array([self.g_grad(x) for x in np.atleast_2d(X)]).reshape(-1, self.n)

    def unit_normal_batch(self, X: np.ndarray) -> np.ndarray:
        grads = self.g_grad_batch(X)
        return grads / np.linalg.norm(grads, axis=1, keepdims=True)

    def hessian_hs_norm_sq(self, x: np.ndarray) -> float:
        """Squared Hilbert-Schmidt (Frobenius) norm of the Hessian of G."""
        return float(np.sum(self.g_hess(x) ** 2))

    def contains(self, x: np.ndarray, tol: float = MEMBERSHIP_TOL) -> bool:
        return self.g_value(x) <= tol

    def contains_batch(self, X: np.ndarray, tol: float = 0.0) -> np.ndarray:
        return self.g_value_batch(X) <= tol

    # ------------------------------------------------------------------
    # projection and distance
    # ------------------------------------------------------------------

    def project(self, x: np.ndarray) -> ProjectionResult:
        x = self._as_point(x)
        point = np.asarray(self._projector(x), dtype=float)
        offset = x - point
        return ProjectionResult(point, offset, float(np.linalg.norm(offset)))

    def project_batch(self, X: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Nearest points and offsets for each row of X."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        points = np.array([self.project(x).point for x in X]).reshape(X.shape)
        return points, X - points

    def distance_sq(self, x: np.ndarray) -> float:
        """|m(x, Omega)|^2; zero exactly on Omega."""
        return self.project(x).distance ** 2

    def distance_sq_batch(self, X: np.ndarray) -> np.ndarray:
        _, offsets = self.project_batch(X)
        return np.einsum("ij,ij->i", offsets, offsets)

    def grad_distance_sq(self, x: np.ndarray) -> np.ndarray:
        """grad d^2(., Omega)(x) = 2 m(x, Omega)."""
        return 2.0 * self.project(x).offset

    def lipschitz_probe(self, x: np.ndarray, displacements: Iterable[np.ndarray]) -> float:
        """max_h |m(x+h) - m(x)| / |h|; the offset map is 1-Lipschitz."""
        x = self._as_point(x)
        base = self.project(x).offset
        worst = 0.0
        for h in displacements:
            h = np.asarray(h, dtype=float)
            norm_h = float(np.linalg.norm(h))
            if norm_h == 0.0:
                raise ValueError("lipschitz_probe displacements must be nonzero")
            moved = self.project(x + h).offset
            worst = max(worst, float(np.linalg.norm(moved - base)) / norm_h)
        return worst

    def sample_points(self, rng: np.random.Generator, count: int = VI_SAMPLES,
                      spread: float = 2.0) -> np.ndarray:
        """Points of Omega biased toward the boundary: projections of Gaussian draws."""
        draws = spread * rng.standard_normal((count, self.n))
        points, _ = self.project_batch(draws)
        return points

    def vi_residual(self, x: np.ndarray, rng: np.random.Generator,
                    count: int = VI_SAMPLES,
                    samples: Optional[np.ndarray] = None) -> float:
        """
        min over sampled c in Omega of <(x - c) - m, m>, with m = m(x, Omega).
        The projection theorem makes this nonnegative.
        """
        x = self._as_point(x)
        result = self.project(x)
        if samples is None:
            samples = self.sample_points(rng, count)
        values = (result.point[None, :] - samples) @ result.offset
        return float(values.min())

    def project_checked(self, x: np.ndarray, rng: np.random.Generator,
                        count: int = VI_SAMPLES) -> ProjectionResult:
        """Projection with the sampled variational-inequality residual filled in."""
        result = self.project(x)
        residual = self.vi_residual(x, rng, count)
        return ProjectionResult(result.point, result.offset, result.distance,
                                result.iterations, residual)

    # ------------------------------------------------------------------
    # integration rules
    # ------------------------------------------------------------------

    def volume_rule(self, model: TruncatedModel, resolution: int,
                    samples: int, stream: int = 0) -> QuadratureRule:
        """Integration rule over Omega against the standard Gaussian (masked Monte Carlo)."""
        return masked_monte_carlo_rule(model, lambda X: self.contains_batch(X), samples, stream)

    def split_rule(self, resolution: int) -> QuadratureRule:
        """Whole-space rule with G^{-1}(0) on a piece boundary (for penalized weights)."""
        raise CapabilityError(f"no split rule for domain kind '{self.kind.value}'")

    def boundary_rule(self, resolution: int, rng: Optional[np.random.Generator] = None) -> QuadratureRule:
        """Rule for the Gaussian surface measure on G^{-1}(0)."""
        raise CapabilityError(f"no boundary parametrisation for domain kind '{self.kind.value}'")

    def describe(self) -> dict:
        return {"kind": self.kind.value, "n": self.n, "name": self.name}

    def _as_point(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).ravel()
        if x.shape[0] != self.n:
            raise ValueError(f"point has dimension {x.shape[0]}, domain has n={self.n}")
        return x


class WholeSpaceDomain(ConvexDomain):
    """Omega = R^n, written as G = -1."""

    kind = DomainKind.WHOLE

    def __init__(self, n: int):
        self.n = int(n)
        self.name = "whole"

    def g_value(self, x):
        self._as_point(x)
        return -1.0

    def g_grad(self, x):
        self._as_point(x)
        return np.zeros(self.n)

    def g_hess(self, x):
        self._as_point(x)
        return np.zeros((self.n, self.n))

    def g_value_batch(self, X):
        return -np.ones(np.atleast_2d(X).shape[0])

    def g_grad_batch(self, X):
        return np.zeros((np.atleast_2d(X).shape[0], self.n))

    def project(self, x):
        x = self._as_point(x)
        return ProjectionResult(x.copy(), np.zeros(self.n), 0.0)

    def project_batch(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return X.copy(), np.zeros_like(X)

    def volume_rule(self, model, resolution, samples, stream=0):
        return build_quadrature(model, "tensor-gauss-hermite", resolution)
