"""
Closed-form identities of the Brownian covariance spectrum.

    sum lambda_k   = 1/2
    sum lambda_k^2 = 1/6

The second one is also the squared Hilbert-Schmidt norm of the Hessian of the L^2-ball
defining function up to a factor 4, since that Hessian is diag(2 lambda_k).
"""

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Tuple

import numpy as np

from ..core.constants import IDENTITY_K, LAMBDA_SQUARED_SUM, LAMBDA_SUM


def _eigenvalues(K: int) -> np.ndarray:
    if K < 1:
        raise ValueError(f"truncation K must be >= 1, got {K}")
    k = np.arange(1, K + 1, dtype=float)
    return 4.0 / (math.pi ** 2 * (2.0 * k - 1.0) ** 2)


def lambda_sum_check(K: int = IDENTITY_K) -> Tuple[float, float]:
    """(sum_{k<=K} lambda_k^2, tail bound 16/pi^4 / (3 (2K-1)^3))."""
    lam = _eigenvalues(K)
    partial = float(np.sum(lam[::-1] ** 2))
    tail = 16.0 / math.pi ** 4 / (3.0 * (2 * K - 1) ** 3)
    return partial, tail


def lambda_sum_identity(K: int = IDENTITY_K) -> Tuple[float, float]:
    """(sum_{k<=K} lambda_k, tail bound 2 / (pi^2 (2K-1)))."""
    lam = _eigenvalues(K)
    partial = float(np.sum(lam[::-1]))
    tail = 2.0 / (math.pi ** 2 * (2 * K - 1))
    return partial, tail


@dataclass
class IdentityReport:
    name: str
    K: int
    partial: float
    tail_bound: float
    target: float

    @property
    def gap(self) -> float:
        return self.target - self.partial

    @property
    def consistent(self) -> bool:
        """Partial sums approach the target from below and the gap is within the tail bound."""
        return 0.0 <= self.gap <= self.tail_bound * (1.0 + 1e-9) + 1e-15

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out.update(gap=self.gap, consistent=self.consistent)
        return out


def hessian_hs_report(K: int = IDENTITY_K) -> IdentityReport:
    """||Hess G||_HS^2 = 4 sum lambda_k^2 for G(x) = sum lambda_k x_k^2 - r^2, target 2/3."""
    partial, tail = lambda_sum_check(K)
    return IdentityReport("hessian_hs_norm_sq", K, 4.0 * partial, 4.0 * tail, 4.0 * LAMBDA_SQUARED_SUM)


def identities(K: int = IDENTITY_K) -> Dict[str, IdentityReport]:
    """All spectrum identities at truncation K."""
    squares, square_tail = lambda_sum_check(K)
    sums, sum_tail = lambda_sum_identity(K)
    return {
        "lambda_squared_sum": IdentityReport("lambda_squared_sum", K, squares, square_tail, LAMBDA_SQUARED_SUM),
        "lambda_sum": IdentityReport("lambda_sum", K, sums, sum_tail, LAMBDA_SUM),
        "hessian_hs_norm_sq": hessian_hs_report(K),
    }
