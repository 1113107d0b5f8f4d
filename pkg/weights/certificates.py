"""
Growth certificates and gradient-norm bounds for the example weights.

U1: |Phi'(s)| <= C e^{beta |s|} and |grad U1(x)| <= tau([0,1]) |Phi'(<t, x>)|.
U2: |Psi_s(s, xi)| <= C(xi) e^{beta |s|} and
    |grad U2(x)|^2 <= 2 sum_k lambda_k int |Psi_s(f_x(xi), xi)|^2 dxi.
"""

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

from ..core.constants import GROWTH_PROBE_POINTS, GROWTH_PROBE_RANGE
from ..core.errors import GrowthCertificateError
from .u1 import WeightU1
from .u2 import WeightU2

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GrowthReport:
    """Max of |d/ds| / (C e^{beta |s|}) over the probe grid."""
    weight: str
    c: float
    beta: float
    max_ratio: float
    worst_s: float
    probe_range: float
    c_l2: float = 0.0

    @property
    def passed(self) -> bool:
        return self.max_ratio <= 1.0

    def to_dict(self):
        return {
            "weight": self.weight,
            "C": self.c,
            "beta": self.beta,
            "max_ratio": self.max_ratio,
            "worst_s": self.worst_s,
            "probe_range": self.probe_range,
            "C_l2": self.c_l2,
            "passed": self.passed,
        }


def growth_certificate(
    w: Union[WeightU1, WeightU2],
    probe_range: float = GROWTH_PROBE_RANGE,
    points: int = GROWTH_PROBE_POINTS,
    strict: bool = True,
) -> GrowthReport:
    """
    Probe the declared growth bound on s in [-probe_range, probe_range].

    Raises:
        GrowthCertificateError: when strict and some ratio exceeds 1.
    """
    s = np.linspace(-probe_range, probe_range, points)
    if isinstance(w, WeightU1):
        c, beta = (float(v) for v in w.growth)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.abs(w.phi.d1(s)) / (c * np.exp(beta * np.abs(s)))
        ratio = np.where(np.abs(w.phi.d1(s)) == 0.0, 0.0, ratio)
        worst = int(np.argmax(ratio))
        report = GrowthReport(w.name, c, beta, float(ratio[worst]), float(s[worst]), probe_range)
    elif isinstance(w, WeightU2):
        beta = w.growth_beta
        S, XI = np.meshgrid(s, w.xi, indexing="ij")
        deriv = np.abs(w.psi.d1(S, XI))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = deriv / (w.growth_c[None, :] * np.exp(beta * np.abs(S)))
        ratio = np.where(deriv == 0.0, 0.0, ratio)
        flat = int(np.argmax(ratio))
        i, _ = np.unravel_index(flat, ratio.shape)
        report = GrowthReport(w.name, float(w.growth_c.max()), beta, float(ratio.ravel()[flat]),
                              float(s[i]), probe_range, w.growth_c_l2)
    else:
        raise TypeError(f"growth certificates exist for U1/U2 weights, got {type(w).__name__}")

    logger.debug("growth certificate %s: max ratio %.6g at s=%.6g", w.name, report.max_ratio, report.worst_s)
    if strict and not report.passed:
        raise GrowthCertificateError(report.worst_s, report.max_ratio)
    return report


@dataclass(frozen=True)
class GradientBoundReport:
    """Worst |grad U(x)| / bound(x) over a point set."""
    weight: str
    max_ratio: float
    points: int

    @property
    def passed(self) -> bool:
        return self.max_ratio <= 1.0 + 1e-12

    def to_dict(self):
        return {"weight": self.weight, "max_ratio": self.max_ratio, "points": self.points,
                "passed": self.passed}


def gradient_bound_report(w: Union[WeightU1, WeightU2], X: np.ndarray) -> GradientBoundReport:
    """Check the gradient-norm bound of the weight at each row of X."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    grads = np.linalg.norm(w.gradient_batch(X), axis=1)
    if isinstance(w, WeightU1):
        bound = w.tau_mass * np.abs(w.phi.d1(X @ w.t_coeffs))
    elif isinstance(w, WeightU2):
        F = X @ w.embedding.T
        flux = (w.psi.d1(F, w.xi[None, :]) ** 2) @ w.omega
        bound = np.sqrt(2.0 * float(w.eigenvalues.sum()) * flux)
    else:
        raise TypeError(f"gradient bounds exist for U1/U2 weights, got {type(w).__name__}")
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(grads == 0.0, 0.0, grads / bound)
    return GradientBoundReport(w.name, float(ratio.max()), X.shape[0])
