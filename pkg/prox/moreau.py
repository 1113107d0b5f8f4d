"""
Moreau-Yosida approximation along H.

    f_alpha(x) = min_h  U(x + h) + |h|^2 / (2 alpha)

The minimizer P(x, alpha) is unique (the inner problem is 1/alpha-strongly convex)
and grad f_alpha(x) = -P(x, alpha) / alpha.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from ..core.constants import ARMIJO_C, ARMIJO_SHRINK, LEVENBERG_INIT, PROX_MAX_ITER, PROX_TOL
from ..core.errors import NonFiniteValueError, ProxConvergenceError
from .potential import ConvexPotential

logger = logging.getLogger(__name__)

_MIN_STEP = 1e-12
_ROUNDOFF = 64.0 * np.finfo(float).eps


@dataclass(frozen=True)
class ProxResult:
    """Inner minimizer and the envelope quantities derived from it."""
    minimizer: np.ndarray
    envelope_value: float
    envelope_grad: np.ndarray
    iterations: int
    grad_residual: float
    alpha: float
    method: str = "newton"

    def to_dict(self):
        return {
            "minimizer": self.minimizer.tolist(),
            "envelope_value": self.envelope_value,
            "envelope_grad": self.envelope_grad.tolist(),
            "iterations": self.iterations,
            "grad_residual": self.grad_residual,
            "alpha": self.alpha,
            "method": self.method,
        }


def _inner(U: ConvexPotential, x: np.ndarray, alpha: float) -> Callable[[np.ndarray], Tuple[float, np.ndarray]]:
    def objective(h):
        value = U.value(x + h) + float(h @ h) / (2.0 * alpha)
        grad = U.gradient(x + h) + h / alpha
        return value, grad
    return objective


def _finite(value, grad) -> bool:
    return math.isfinite(value) and bool(np.all(np.isfinite(grad)))


def _roundoff_floor(U: ConvexPotential, x: np.ndarray, h: np.ndarray, alpha: float) -> float:
    """Size of the inner gradient that rounding alone can produce."""
    scale = float(np.linalg.norm(U.gradient(x + h))) + float(np.linalg.norm(h)) / alpha
    return _ROUNDOFF * scale


def _accept(trial_value, trial_grad, value, res, t, slope) -> bool:
    if not _finite(trial_value, trial_grad):
        return False
    if trial_value <= value + ARMIJO_C * t * slope:
        return True
    # at the rounding floor values stop discriminating; fall back to the gradient norm
    flat = abs(trial_value - value) <= 1e-14 * max(1.0, abs(value))
    return flat and float(np.linalg.norm(trial_grad)) < res


def _damped_newton_step(hess: np.ndarray, grad: np.ndarray) -> np.ndarray:
    """Solve (hess + mu I) s = -grad, raising mu until the Cholesky factorisation succeeds."""
    n = grad.shape[0]
    mu = 0.0
    scale = max(1.0, float(np.abs(np.diag(hess)).max()))
    for _ in range(60):
        try:
            factor = cho_factor(hess + mu * np.eye(n))
            return cho_solve(factor, -grad)
        except LinAlgError:
            mu = max(LEVENBERG_INIT * scale, 10.0 * mu)
            logger.debug("prox Newton: Levenberg damping raised to %.3e", mu)
    return -grad / scale


def _newton(U, x, alpha, h, tol, max_iter):
    objective = _inner(U, x, alpha)
    value, grad = objective(h)
    best_h, best_res = h, float(np.linalg.norm(grad))
    for it in range(max_iter + 1):
        res = float(np.linalg.norm(grad))
        if res < best_res:
            best_h, best_res = h, res
        if res <= tol or res <= _roundoff_floor(U, x, h, alpha):
            return h, it, res
        if it == max_iter:
            break
        hess = U.hessian(x + h) + np.eye(h.shape[0]) / alpha
        step = _damped_newton_step(hess, grad)
        slope = float(grad @ step)
        t = 1.0
        while t >= _MIN_STEP:
            trial = h + t * step
            trial_value, trial_grad = objective(trial)
            if _accept(trial_value, trial_grad, value, res, t, slope):
                break
            t *= ARMIJO_SHRINK
        else:
            logger.debug("prox Newton: line search stalled at residual %.3e", res)
            break
        h, value, grad = trial, trial_value, trial_grad
    raise ProxConvergenceError(max_iter, best_h, best_res)


def _gradient_descent(U, x, alpha, h, tol, max_iter):
    """Steps alpha / (1 + alpha L) with a backtracked, adaptively relaxed estimate L."""
    objective = _inner(U, x, alpha)
    value, grad = objective(h)
    lipschitz = 1.0
    best_h, best_res = h, float(np.linalg.norm(grad))
    for it in range(max_iter + 1):
        res = float(np.linalg.norm(grad))
        if res < best_res:
            best_h, best_res = h, res
        if res <= tol or res <= _roundoff_floor(U, x, h, alpha):
            return h, it, res
        if it == max_iter:
            break
        for _ in range(80):
            size = alpha / (1.0 + alpha * lipschitz)
            trial = h - size * grad
            trial_value, trial_grad = objective(trial)
            if _accept(trial_value, trial_grad, value, res, size, -res * res):
                break
            lipschitz *= 2.0
        else:
            logger.debug("prox gradient descent: backtracking stalled at residual %.3e", res)
            break
        lipschitz *= 0.7
        h, value, grad = trial, trial_value, trial_grad
    raise ProxConvergenceError(max_iter, best_h, best_res)


def prox(
    U: ConvexPotential,
    x,
    alpha: float,
    tol: float = PROX_TOL,
    max_iter: int = PROX_MAX_ITER,
    use_closed_form: bool = True,
) -> ProxResult:
    """
    Minimizer P(x, alpha) of h -> U(x + h) + |h|^2/(2 alpha).

    Args:
        U: Convex potential; damped Newton is used when it has a Hessian, gradient
           descent with Armijo backtracking otherwise.
        x: Base point.
        alpha: Envelope level, > 0.
        tol: Bound on the inner gradient norm at exit.
        use_closed_form: Take the potential's closed-form minimizer when it has one.

    Returns:
        ProxResult with envelope value and gradient -P/alpha.
    """
    if not alpha > 0.0:
        raise ValueError(f"prox level alpha must be positive, got {alpha}")
    x = np.asarray(x, dtype=float).ravel()
    if not np.all(np.isfinite(x)):
        raise NonFiniteValueError("prox base point", x.tolist())

    if use_closed_form:
        h = U.closed_form_prox(x, alpha)
        if h is not None:
            return _result(U, x, alpha, np.asarray(h, dtype=float), 0, "closed-form")

    if not math.isfinite(U.value(x)):
        raise NonFiniteValueError("potential value", x.tolist())
    h0 = -alpha * U.gradient(x)
    if not np.all(np.isfinite(h0)) or not math.isfinite(U.value(x + h0)):
        h0 = np.zeros_like(x)

    if U.has_hessian:
        h, iterations, _ = _newton(U, x, alpha, h0, tol, max_iter)
        method = "newton"
    else:
        h, iterations, _ = _gradient_descent(U, x, alpha, h0, tol, max_iter)
        method = "gradient"
    logger.debug("prox(%s, alpha=%.3g): %s converged in %d iterations", U.name, alpha, method, iterations)
    return _result(U, x, alpha, h, iterations, method)


def _result(U, x, alpha, h, iterations, method) -> ProxResult:
    value = U.value(x + h) + float(h @ h) / (2.0 * alpha)
    residual = float(np.linalg.norm(U.gradient(x + h) + h / alpha))
    if not math.isfinite(value):
        raise NonFiniteValueError("envelope value", (x + h).tolist())
    return ProxResult(h, value, -h / alpha, iterations, residual, alpha, method)


def envelope_value(U: ConvexPotential, x, alpha: float, **kwargs) -> float:
    """f_alpha(x) = U(x + P) + |P|^2/(2 alpha); never above U(x)."""
    return prox(U, x, alpha, **kwargs).envelope_value


def envelope_grad(U: ConvexPotential, x, alpha: float, **kwargs) -> np.ndarray:
    """grad f_alpha(x) = -P(x, alpha)/alpha."""
    return prox(U, x, alpha, **kwargs).envelope_grad


class EnvelopePotential(ConvexPotential):
    """
    f_alpha as a potential in its own right.

    Gradient -P/alpha is analytic; when the base has a Hessian so does the envelope:
    (I - (I + alpha hess U(x + P))^{-1}) / alpha.
    """

    def __init__(self, base: ConvexPotential, alpha: float, tol: float = PROX_TOL,
                 max_iter: int = PROX_MAX_ITER):
        if not alpha > 0.0:
            raise ValueError(f"envelope level alpha must be positive, got {alpha}")
        self.base = base
        self.alpha = float(alpha)
        self.tol = tol
        self.max_iter = max_iter
        self.convexity_declared = base.convexity_declared
        self.name = f"{base.name}@alpha={alpha:.6g}"

    def _prox(self, x) -> ProxResult:
        return prox(self.base, x, self.alpha, tol=self.tol, max_iter=self.max_iter)

    def value(self, x):
        return self._prox(x).envelope_value

    def gradient(self, x):
        return self._prox(x).envelope_grad

    def evaluate(self, x):
        result = self._prox(x)
        return result.envelope_value, result.envelope_grad

    @property
    def has_hessian(self):
        return self.base.has_hessian

    def hessian(self, x):
        x = np.asarray(x, dtype=float)
        result = self._prox(x)
        n = x.shape[0]
        inner = np.eye(n) + self.alpha * self.base.hessian(x + result.minimizer)
        hess = (np.eye(n) - np.linalg.inv(inner)) / self.alpha
        return 0.5 * (hess + hess.T)

    def value_batch(self, X):
        return np.array([self.value(x) for x in np.atleast_2d(X)])

    def gradient_batch(self, X):
        X = np.atleast_2d(X)
        return np.array([self.gradient(x) for x in X]).reshape(X.shape)
