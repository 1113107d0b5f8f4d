"""
Ellipsoids {sum_k lambda_k x_k^2 <= r^2}.

With axis weights equal to the model eigenvalues this is the L^2 ball
{int_0^1 f(xi)^2 dxi <= r^2} written in truncated coordinates.

Projection solves the Lagrange condition y_k = x_k / (1 + 2 t lambda_k) for the
multiplier t >= 0, i.e. the root of

    phi(t) = sum_k lambda_k x_k^2 / (1 + 2 t lambda_k)^2 - r^2,

which is convex and strictly decreasing on [0, inf). Newton from t = 0 is monotone;
a bisection step replaces any Newton iterate that leaves the bracket.
"""

import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.special import gammaln

from ..core.constants import (
    HALF_LINE_SPAN,
    POLAR_MAX_DIMENSION,
    PROJECTION_MAX_ITER,
    PROJECTION_TOL,
    TENSOR_NODE_BUDGET,
    DomainKind,
    QuadratureKind,
)
from ..core.errors import NodeBudgetError, ProjectionConvergenceError
from ..core.model import TruncatedModel
from ..core.quadrature import QuadratureRule
from .base import ConvexDomain, ProjectionResult

logger = logging.getLogger(__name__)

_BRACKET_FLOOR = 4.0 * np.finfo(float).eps


def sphere_area(n: int) -> float:
    """Hausdorff measure of the unit sphere S^{n-1} in R^n."""
    return math.exp(math.log(2.0) + 0.5 * n * math.log(math.pi) - gammaln(0.5 * n))


class EllipsoidDomain(ConvexDomain):
    """G(x) = sum_k lambda_k x_k^2 - r^2; grad G = 2 lambda x; Hessian diag(2 lambda)."""

    kind = DomainKind.ELLIPSOID

    def __init__(
        self,
        axis_weights: Sequence[float],
        r: float = 1.0,
        tol: float = PROJECTION_TOL,
        max_iter: int = PROJECTION_MAX_ITER,
        name: str = "ellipsoid",
    ):
        lam = np.asarray(axis_weights, dtype=float).ravel()
        if lam.size == 0 or np.any(lam <= 0.0) or not np.all(np.isfinite(lam)):
            raise ValueError("ellipsoid axis weights must be finite and positive")
        if not r > 0.0:
            raise ValueError(f"ellipsoid radius must be positive, got {r}")
        lam.setflags(write=False)
        self.axis_weights = lam
        self.r = float(r)
        self.n = lam.shape[0]
        self.tol = float(tol)
        self.max_iter = int(max_iter)
        self.name = name

    @classmethod
    def from_model(cls, model: TruncatedModel, r: float = 1.0, **kwargs) -> "EllipsoidDomain":
        return cls(model.eigenvalues, r, **kwargs)

    @property
    def semi_axes(self) -> np.ndarray:
        """r / sqrt(lambda_k)."""
        return self.r / np.sqrt(self.axis_weights)

    # ------------------------------------------------------------------
    # defining function
    # ------------------------------------------------------------------

    def g_value(self, x):
        x = self._as_point(x)
        return float(self.axis_weights @ (x * x) - self.r ** 2)

    def g_grad(self, x):
        return 2.0 * self.axis_weights * self._as_point(x)

    def g_hess(self, x):
        self._as_point(x)
        return np.diag(2.0 * self.axis_weights)

    def g_value_batch(self, X):
        X = np.atleast_2d(X)
        return (X * X) @ self.axis_weights - self.r ** 2

    def g_grad_batch(self, X):
        return 2.0 * np.atleast_2d(X) * self.axis_weights[None, :]

    # ------------------------------------------------------------------
    # projection
    # ------------------------------------------------------------------

    def _solve_multipliers(self, X: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Multiplier t and iteration count for each (exterior) row of X."""
        lam = self.axis_weights
        r2 = self.r ** 2
        xsq = X * X
        m = X.shape[0]
        tol = self.tol * max(1.0, r2)

        # phi(t) <= |x|^2 / (4t) and phi(t) <= |x|^2 / (4 t^2 lambda_min) give upper brackets
        norm_sq = xsq.sum(axis=1)
        lo = np.zeros(m)
        hi = np.minimum(norm_sq / (4.0 * r2), np.sqrt(norm_sq / lam.min()) / (2.0 * self.r))
        t = np.zeros(m)
        iterations = np.zeros(m, dtype=int)
        active = np.ones(m, dtype=bool)
        fallbacks = 0

        for it in range(1, self.max_iter + 1):
            denom = 1.0 + 2.0 * t[:, None] * lam[None, :]
            val = (lam * xsq / denom ** 2).sum(axis=1) - r2
            deriv = -4.0 * (lam ** 2 * xsq / denom ** 3).sum(axis=1)

            converged = (np.abs(val) <= tol) | (hi - lo <= _BRACKET_FLOOR * np.maximum(1.0, hi))
            iterations[active & converged] = it
            active &= ~converged
            if not active.any():
                break

            positive = val > 0.0
            lo = np.where(active & positive, t, lo)
            hi = np.where(active & ~positive, t, hi)
            with np.errstate(divide="ignore", invalid="ignore"):
                step = t - val / deriv
            inside = np.isfinite(step) & (step > lo) & (step < hi)
            fallbacks += int(np.count_nonzero(active & ~inside))
            t = np.where(active, np.where(inside, step, 0.5 * (lo + hi)), t)
        else:
            worst = int(np.flatnonzero(active)[0])
            raise ProjectionConvergenceError(
                self.max_iter, (float(lo[worst]), float(hi[worst])), float(abs(val[worst]))
            )

        if fallbacks:
            logger.warning("ellipsoid projection: %d bisection fallback steps", fallbacks)
        logger.debug("ellipsoid projection: %d exterior points, max %d iterations",
                     m, int(iterations.max(initial=0)))
        return t, iterations

    def project(self, x) -> ProjectionResult:
        x = self._as_point(x)
        if self.g_value(x) <= 0.0:
            return ProjectionResult(x.copy(), np.zeros(self.n), 0.0, 0)
        t, iterations = self._solve_multipliers(x[None, :])
        point = x / (1.0 + 2.0 * t[0] * self.axis_weights)
        offset = x - point
        return ProjectionResult(point, offset, float(np.linalg.norm(offset)), int(iterations[0]))

    def project_batch(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        points = X.copy()
        outside = self.g_value_batch(X) > 0.0
        if outside.any():
            t, _ = self._solve_multipliers(X[outside])
            points[outside] = X[outside] / (1.0 + 2.0 * t[:, None] * self.axis_weights[None, :])
        return points, X - points

    # ------------------------------------------------------------------
    # sphere rule
    # ------------------------------------------------------------------

    def _sphere_rule(self, resolution: int, rng: Optional[np.random.Generator],
                     node_budget: int) -> Tuple[np.ndarray, np.ndarray, QuadratureKind, int]:
        n = self.n
        if n == 2:
            theta = 2.0 * math.pi * (np.arange(resolution) + 0.5) / resolution
            y = np.stack([np.cos(theta), np.sin(theta)], axis=1)
            return y, np.full(resolution, 2.0 * math.pi / resolution), QuadratureKind.SURFACE, 0

        if n == 3:
            total = 2 * resolution * resolution
            if total > node_budget:
                raise NodeBudgetError(total, node_budget)
            u, wu = np.polynomial.legendre.leggauss(resolution)
            azimuth = 2.0 * math.pi * (np.arange(2 * resolution) + 0.5) / (2 * resolution)
            uu, aa = np.meshgrid(u, azimuth, indexing="ij")
            ring = np.sqrt(1.0 - uu ** 2)
            y = np.stack([ring * np.cos(aa), ring * np.sin(aa), uu], axis=-1).reshape(-1, 3)
            weights = np.repeat(wu, 2 * resolution) * (math.pi / resolution)
            return y, weights, QuadratureKind.SURFACE, 0

        if rng is None:
            raise ValueError(f"boundary rule in n={n} is Monte Carlo and needs a generator")
        count = resolution * resolution
        g = rng.standard_normal((count, n))
        y = g / np.linalg.norm(g, axis=1, keepdims=True)
        return y, np.full(count, sphere_area(n) / count), QuadratureKind.SURFACE_MONTE_CARLO, count

    # ------------------------------------------------------------------
    # volume rules
    # ------------------------------------------------------------------

    def _directions(self, resolution: int, node_budget: int) -> Tuple[np.ndarray, np.ndarray]:
        if self.n == 1:
            return np.array([[1.0], [-1.0]]), np.ones(2)
        y, weights, _, _ = self._sphere_rule(resolution, None, node_budget)
        return y, weights

    def _polar_rule(self, radial: int, resolution: int, exterior: bool,
                    node_budget: int) -> Tuple[np.ndarray, np.ndarray]:
        """
        Nodes x = rho D y against the standard Gaussian: dx = det D rho^{n-1} d rho d sigma(y).

        Interior: rho in [0, 1]. Exterior: rho = 1 + (rho_max - 1) t^2 with t in [0, 1] and
        |x| running HALF_LINE_SPAN past the boundary, so the kink at rho = 1 is a piece end.
        """
        y, wy = self._directions(resolution, node_budget)
        total = y.shape[0] * radial
        if total > node_budget:
            raise NodeBudgetError(total, node_budget)
        u, wu = np.polynomial.legendre.leggauss(radial)
        t, wt = 0.5 * (u + 1.0), 0.5 * wu
        edge = y * self.semi_axes[None, :]                     # boundary point along each direction
        if exterior:
            reach = HALF_LINE_SPAN / np.linalg.norm(edge, axis=1)
            rho = 1.0 + reach[:, None] * t[None, :] ** 2
            drho = 2.0 * reach[:, None] * (t * wt)[None, :]
        else:
            rho = np.broadcast_to(t, (y.shape[0], radial))
            drho = np.broadcast_to(wt, (y.shape[0], radial))
        nodes = (rho[:, :, None] * edge[:, None, :]).reshape(-1, self.n)
        density = np.exp(-0.5 * np.einsum("ij,ij->i", nodes, nodes)) / (2.0 * math.pi) ** (0.5 * self.n)
        weights = (float(np.prod(self.semi_axes)) * rho ** (self.n - 1) * drho * wy[:, None]).ravel() * density
        return nodes, weights

    def volume_rule(self, model: TruncatedModel, resolution: int, samples: int,
                    stream: int = 0, node_budget: int = TENSOR_NODE_BUDGET) -> QuadratureRule:
        """
        Polar rule over the ellipsoid for n <= POLAR_MAX_DIMENSION (radial Gauss-Legendre
        with `resolution` points times the boundary sphere rule); masked Monte Carlo above.
        """
        if self.n > POLAR_MAX_DIMENSION:
            return super().volume_rule(model, resolution, samples, stream)
        nodes, weights = self._polar_rule(int(resolution), int(resolution), False, node_budget)
        return QuadratureRule(QuadratureKind.ELLIPSOID_POLAR, nodes, weights,
                              f"ellipsoid polar n={self.n} r={self.r:.6g} resolution={resolution}")

    def split_rule(self, resolution: int, node_budget: int = TENSOR_NODE_BUDGET) -> QuadratureRule:
        """Interior and exterior polar rules joined along {G = 0}."""
        if self.n > POLAR_MAX_DIMENSION:
            return super().split_rule(resolution)
        inside = self._polar_rule(int(resolution), int(resolution), False, node_budget)
        outside = self._polar_rule(int(resolution), int(resolution), True, node_budget)
        return QuadratureRule(
            QuadratureKind.ELLIPSOID_POLAR,
            np.concatenate([inside[0], outside[0]]),
            np.concatenate([inside[1], outside[1]]),
            f"split ellipsoid polar n={self.n} r={self.r:.6g} resolution={resolution}",
        )

    # ------------------------------------------------------------------
    # boundary rule
    # ------------------------------------------------------------------

    def boundary_rule(self, resolution: int, rng: Optional[np.random.Generator] = None,
                      node_budget: int = TENSOR_NODE_BUDGET) -> QuadratureRule:
        """
        Gaussian surface measure on {G = 0}.

        The unit sphere rule (angular grid in n=2, Gauss-Legendre x uniform azimuth in
        n=3, uniform Monte Carlo for n >= 4) is mapped by x = D y, D = diag(semi_axes),
        with surface Jacobian |det D| |D^{-1} y|.
        """
        semi = self.semi_axes
        if self.n == 1:
            nodes = np.array([[semi[0]], [-semi[0]]])
            density = math.exp(-0.5 * semi[0] ** 2) / math.sqrt(2.0 * math.pi)
            return QuadratureRule(QuadratureKind.SURFACE, nodes, np.full(2, density),
                                  f"ellipsoid endpoints r={self.r:.6g}")

        y, sphere_weights, kind, count = self._sphere_rule(int(resolution), rng, node_budget)
        x = y * semi[None, :]
        jacobian = float(np.prod(semi)) * np.linalg.norm(y / semi[None, :], axis=1)
        density = np.exp(-0.5 * np.einsum("ij,ij->i", x, x)) / (2.0 * math.pi) ** (0.5 * self.n)
        return QuadratureRule(
            kind,
            x,
            sphere_weights * jacobian * density,
            f"ellipsoid surface n={self.n} r={self.r:.6g} resolution={resolution}",
            sample_count=count,
        )

    def describe(self):
        return {"kind": self.kind.value, "n": self.n, "r": self.r,
                "axis_weights": self.axis_weights.tolist()}
