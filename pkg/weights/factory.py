"""
Weight construction from the `weight` config block.
"""

from ..core.config import WeightBlock
from ..core.constants import WeightKind
from ..core.model import TruncatedModel
from ..prox.potential import ConvexPotential, QuadraticPotential, ZeroPotential
from .u1 import WeightU1
from .u2 import WeightU2


def build_weight(block: WeightBlock, model: TruncatedModel) -> ConvexPotential:
    """ConvexPotential for the configured weight kind."""
    kind = WeightKind(block.kind)
    growth = block.growth or {}
    if kind == WeightKind.ZERO:
        return ZeroPotential()
    if kind == WeightKind.QUADRATIC:
        return QuadraticPotential(block.curvature)
    if kind == WeightKind.U1:
        declared = None
        if growth:
            declared = (float(growth["C"]), float(growth["beta"]))
        return WeightU1(model, block.phi, [tuple(p) for p in block.tau], declared)
    if kind == WeightKind.U2:
        return WeightU2(model, block.psi, block.xi_nodes, growth.get("C"), growth.get("beta"))
    raise ValueError(f"unknown weight kind '{block.kind}'")
