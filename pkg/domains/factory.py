"""
Domain construction from the `domain` config block, and the integrability report
for |grad G|^{-1}.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core.config import DomainBlock
from ..core.constants import DomainKind
from ..core.model import TruncatedModel
from ..core.quadrature import QuadratureRule
from .base import ConvexDomain
from .ellipsoid import EllipsoidDomain
from .halfspace import HalfspaceDomain

logger = logging.getLogger(__name__)


def build_domain(block: DomainBlock, model: TruncatedModel) -> Optional[ConvexDomain]:
    """Domain for the config block; None when `kind` is none."""
    kind = DomainKind(block.kind)
    if kind == DomainKind.NONE:
        return None
    if kind == DomainKind.WHOLE:
        return ConvexDomain.whole_space(model.n)
    if kind == DomainKind.HALFSPACE:
        if block.a is not None:
            return HalfspaceDomain(block.a, block.c)
        if block.sigma:
            return HalfspaceDomain.from_measure(model, [tuple(p) for p in block.sigma], block.c)
        logger.info("halfspace without a or sigma: using the first coordinate axis as normal")
        a = np.zeros(model.n)
        a[0] = 1.0
        return HalfspaceDomain(a, block.c)
    if kind == DomainKind.ELLIPSOID:
        return EllipsoidDomain.from_model(model, block.r)
    raise ValueError(f"domain kind '{kind.value}' cannot be built from configuration")


@dataclass(frozen=True)
class NondegeneracyReport:
    """Estimate of int |grad G|^{-q} d gamma over a whole-space rule."""
    q: float
    estimate: float
    stderr: float
    finite: bool
    min_grad_norm: float

    def to_dict(self):
        return {
            "q": self.q,
            "estimate": self.estimate,
            "stderr": self.stderr,
            "finite": self.finite,
            "min_grad_norm": self.min_grad_norm,
        }


def nondegeneracy_report(domain: ConvexDomain, rule: QuadratureRule, q: float = 1.0) -> NondegeneracyReport:
    """
    Integrability of |grad G|^{-q} against the Gaussian.

    Halfspaces give the constant |a|^{-q}; for ellipsoids the integral is finite
    exactly when q < n.
    """
    norms = np.linalg.norm(domain.g_grad_batch(rule.nodes), axis=1)
    min_norm = float(norms.min()) if norms.size else float("inf")
    if min_norm == 0.0:
        return NondegeneracyReport(q, float("inf"), 0.0, False, 0.0)
    estimate, stderr = rule.integrate_with_stderr(norms ** (-q))
    return NondegeneracyReport(q, estimate, stderr, bool(np.isfinite(estimate)), min_norm)
