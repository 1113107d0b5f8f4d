"""
Executable forms of the Moreau-Yosida properties: semigroup identity, gradient-norm
monotonicity, subdifferential inclusion, 1-Lipschitz prox map, monotone convergence,
plus a brute-force grid-search oracle for low dimension.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from ..core.constants import GRID_SEARCH_RADIUS, GRID_SEARCH_STEP
from .moreau import EnvelopePotential, envelope_value, prox
from .potential import ConvexPotential

logger = logging.getLogger(__name__)


def semigroup_check(U: ConvexPotential, x, alpha: float, beta: float) -> Tuple[float, float]:
    """(lhs, rhs) = ((f_alpha)_beta(x), f_{alpha+beta}(x))."""
    if not (alpha > 0.0 and beta > 0.0):
        raise ValueError("semigroup_check needs alpha > 0 and beta > 0")
    lhs = envelope_value(EnvelopePotential(U, alpha), x, beta)
    rhs = envelope_value(U, x, alpha + beta)
    return lhs, rhs


def gradient_monotonicity_check(U: ConvexPotential, x, alpha: float, beta: float) -> Tuple[float, float]:
    """(|grad f_{alpha+beta}(x)|, |grad f_alpha(x)|); the first never exceeds the second."""
    if not (alpha > 0.0 and beta > 0.0):
        raise ValueError("gradient_monotonicity_check needs alpha > 0 and beta > 0")
    outer = float(np.linalg.norm(prox(U, x, alpha + beta).envelope_grad))
    inner = float(np.linalg.norm(prox(U, x, alpha).envelope_grad))
    return outer, inner


def subdifferential_inclusion_check(U: ConvexPotential, x, alpha: float,
                                    probes: Iterable[np.ndarray]) -> float:
    """
    min over h of U(x+h) - U(x+P) - <grad f_alpha(x), h - P>.
    Nonnegative because grad f_alpha(x) is a subgradient of U(x + .) at P.
    """
    x = np.asarray(x, dtype=float)
    result = prox(U, x, alpha)
    p = result.minimizer
    anchor = U.value(x + p)
    worst = np.inf
    for h in probes:
        h = np.asarray(h, dtype=float)
        gap = U.value(x + h) - anchor - float(result.envelope_grad @ (h - p))
        worst = min(worst, gap)
    return float(worst)


def prox_lipschitz_probe(U: ConvexPotential, x, alpha: float,
                         displacements: Iterable[np.ndarray]) -> float:
    """max over h of |P(x+h) - P(x)| / |h|."""
    x = np.asarray(x, dtype=float)
    base = prox(U, x, alpha).minimizer
    worst = 0.0
    for h in displacements:
        h = np.asarray(h, dtype=float)
        norm_h = float(np.linalg.norm(h))
        if norm_h == 0.0:
            raise ValueError("prox_lipschitz_probe displacements must be nonzero")
        moved = prox(U, x + h, alpha).minimizer
        worst = max(worst, float(np.linalg.norm(moved - base)) / norm_h)
    return worst


def grid_search_prox(
    U: ConvexPotential,
    x,
    alpha: float,
    step: float = GRID_SEARCH_STEP,
    radius: float = GRID_SEARCH_RADIUS,
    refine_points: int = 40,
) -> Tuple[np.ndarray, float]:
    """
    Brute-force minimizer of U(x+h) + |h|^2/(2 alpha) over a ball around -alpha grad U(x).

    Coarse-to-fine: the first grid covers the ball with spacing radius/50, each further
    grid spans +-refine_points/10 of the previous spacing at a tenth of it, down to `step`.
    Only meant for n <= 2.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    if n > 2:
        raise ValueError(f"grid_search_prox is limited to n <= 2, got n={n}")
    center = -alpha * U.gradient(x)

    def best_on(axis_points, mask_ball):
        grids = np.meshgrid(*([axis_points] * n), indexing="ij")
        offsets = np.stack([g.ravel() for g in grids], axis=1)
        if mask_ball:
            offsets = offsets[np.linalg.norm(offsets, axis=1) <= radius]
        candidates = anchor + offsets
        values = U.value_batch(x + candidates) + np.einsum("ij,ij->i", candidates, candidates) / (2.0 * alpha)
        i = int(np.argmin(values))
        return candidates[i], float(values[i])

    spacing = radius / 50.0
    anchor = center
    best, best_value = best_on(np.arange(-50, 51) * spacing, True)
    while spacing > step * (1.0 + 1e-9):
        spacing = max(spacing / 10.0, step)
        anchor = best
        best, best_value = best_on(np.arange(-refine_points, refine_points + 1) * spacing, False)
    return best, best_value


@dataclass
class EnvelopeSeries:
    """Envelope values and gradient norms along a decreasing alpha grid."""
    alphas: List[float]
    values: List[float]
    grad_norms: List[float]
    potential_value: float
    potential_grad_norm: float
    minimizer_norms: List[float] = field(default_factory=list)

    @property
    def values_nondecreasing(self) -> float:
        """Largest decrease of f_alpha as alpha shrinks (<= 0 means monotone)."""
        diffs = np.diff(self.values)
        return float(-diffs.min()) if diffs.size else 0.0

    @property
    def grad_norms_nondecreasing(self) -> float:
        diffs = np.diff(self.grad_norms)
        return float(-diffs.min()) if diffs.size else 0.0

    def to_dict(self):
        return {
            "alphas": self.alphas,
            "values": self.values,
            "grad_norms": self.grad_norms,
            "minimizer_norms": self.minimizer_norms,
            "potential_value": self.potential_value,
            "potential_grad_norm": self.potential_grad_norm,
        }


def envelope_convergence_series(U: ConvexPotential, x, alphas: Sequence[float]) -> EnvelopeSeries:
    """f_alpha(x), |grad f_alpha(x)| and |P(x, alpha)| along a strictly decreasing alpha grid."""
    alphas = [float(a) for a in alphas]
    if any(b >= a for a, b in zip(alphas, alphas[1:])):
        raise ValueError("alpha grid must be strictly decreasing")
    x = np.asarray(x, dtype=float)
    values, grad_norms, minimizer_norms = [], [], []
    for alpha in alphas:
        result = prox(U, x, alpha)
        values.append(result.envelope_value)
        grad_norms.append(float(np.linalg.norm(result.envelope_grad)))
        minimizer_norms.append(float(np.linalg.norm(result.minimizer)))
    return EnvelopeSeries(
        alphas=alphas,
        values=values,
        grad_norms=grad_norms,
        potential_value=U.value(x),
        potential_grad_norm=float(np.linalg.norm(U.gradient(x))),
        minimizer_norms=minimizer_norms,
    )
