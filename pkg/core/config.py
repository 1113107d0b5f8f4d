"""
Run configuration.
Every run is described by a single YAML (JSON-compatible) document with one block
per concern; defaults come from core.constants.
"""

import copy
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import yaml

from .constants import (
    DEFAULT_ALPHA,
    DEFAULT_ALPHA_GRID,
    DEFAULT_BOUNDARY_RESOLUTION,
    DEFAULT_DEGREE,
    DEFAULT_DIMENSION,
    DEFAULT_LAMBDA,
    DEFAULT_MC_SAMPLES,
    DEFAULT_NEUMANN_DEGREES,
    DEFAULT_SEED,
    DEFAULT_TENSOR_POINTS,
    DEFAULT_XI_NODES,
    BOUND_TOL,
    HESSIAN_RATIO_MAX,
    IBP_RANDOM_CASES,
    IDENTITY_K,
    STDERR_MULTIPLIER,
    QuadratureKind,
)

# YAML keys that are Python keywords
_KEY_ALIASES = {"lambda": "lam"}
_FIELD_ALIASES = {v: k for k, v in _KEY_ALIASES.items()}


@dataclass
class ModelBlock:
    """Truncation dimension and sampling seed."""
    n: int = DEFAULT_DIMENSION
    seed: int = DEFAULT_SEED


@dataclass
class DomainBlock:
    """
    Convex domain. `kind` is none, whole, halfspace or ellipsoid.

    Halfspaces take an explicit normal `a` or a measure `sigma` as (node, mass) pairs;
    without either the normal is the first coordinate axis.
    """
    kind: str = "none"
    a: Optional[List[float]] = None
    c: float = 0.0
    r: float = 1.0
    sigma: Optional[List[List[float]]] = None


@dataclass
class WeightBlock:
    """Convex weight U in the density e^{-U}."""
    kind: str = "zero"
    phi: str = "cosh"
    tau: List[List[float]] = field(default_factory=lambda: [[1.0, 1.0]])
    psi: str = "square"
    growth: Optional[Dict[str, float]] = None
    xi_nodes: int = DEFAULT_XI_NODES
    curvature: float = 1.0
    exact: bool = False   # V_alpha uses U itself instead of its envelope U_alpha


@dataclass
class SolverBlock:
    """Galerkin discretisation and forcing term."""
    degree: int = DEFAULT_DEGREE
    lam: float = DEFAULT_LAMBDA
    mode: str = "whole-space"
    alpha: float = DEFAULT_ALPHA
    quadrature: Dict[str, Any] = field(default_factory=lambda: {
        "kind": QuadratureKind.TENSOR_GAUSS_HERMITE.value,
        "resolution": DEFAULT_TENSOR_POINTS,
    })
    mc_samples: int = DEFAULT_MC_SAMPLES
    rhs: Dict[str, Any] = field(default_factory=lambda: {"kind": "hermite", "index": [1]})


@dataclass
class VerifyBlock:
    """Verification grids and tolerances."""
    alphas: List[float] = field(default_factory=lambda: list(DEFAULT_ALPHA_GRID))
    degrees: List[int] = field(default_factory=lambda: list(DEFAULT_NEUMANN_DEGREES))
    boundary_resolution: int = DEFAULT_BOUNDARY_RESOLUTION
    bound_tol: float = BOUND_TOL
    hessian_ratio_max: float = HESSIAN_RATIO_MAX
    stderr_multiplier: float = STDERR_MULTIPLIER
    ibp_cases: int = IBP_RANDOM_CASES
    identity_k: int = IDENTITY_K
    prox_cases: int = 100
    projection_cases: int = 100
    membership_samples: int = 10_000
    resolution: Optional[int] = None   # override rule for verification integrals


@dataclass
class OutputBlock:
    """Artifact directory and formats."""
    directory: str = "out"
    formats: List[str] = field(default_factory=lambda: ["csv", "json"])


BLOCKS = {
    "model": ModelBlock,
    "domain": DomainBlock,
    "weight": WeightBlock,
    "solver": SolverBlock,
    "verify": VerifyBlock,
    "output": OutputBlock,
}


@dataclass
class RunConfig:
    """
    Master run configuration.
    One attribute per block; unknown keys are rejected earlier by ConfigSchema.
    """
    model: ModelBlock = field(default_factory=ModelBlock)
    domain: DomainBlock = field(default_factory=DomainBlock)
    weight: WeightBlock = field(default_factory=WeightBlock)
    solver: SolverBlock = field(default_factory=SolverBlock)
    verify: VerifyBlock = field(default_factory=VerifyBlock)
    output: OutputBlock = field(default_factory=OutputBlock)

    @classmethod
    def load(cls, config_path: Optional[str] = None,
             overrides: Sequence[str] = ()) -> "RunConfig":
        """Load configuration from a YAML file (or defaults) and apply overrides."""
        data = read_config_file(config_path) if config_path else {}
        apply_overrides(data, overrides)
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        config = cls()
        config._update_from_dict(data)
        return config

    def _update_from_dict(self, data: Dict[str, Any]) -> None:
        """Update config from a nested dictionary."""
        for block_name in BLOCKS:
            if block_name not in data or data[block_name] is None:
                continue
            block = getattr(self, block_name)
            for k, v in data[block_name].items():
                name = _KEY_ALIASES.get(k, k)
                if hasattr(block, name):
                    setattr(block, name, copy.deepcopy(v))

    def to_dict(self) -> Dict[str, Any]:
        data = {}
        for block_name in BLOCKS:
            block = getattr(self, block_name)
            data[block_name] = {
                _FIELD_ALIASES.get(f.name, f.name): copy.deepcopy(getattr(block, f.name))
                for f in fields(block)
            }
        return data

    def save(self, config_path: str) -> None:
        """Save configuration to a YAML file."""
        Path(config_path).parent.mkdir(parents=True, exist_ok=True)
        with open(config_path, "w") as f:
            yaml.safe_dump(self.to_dict(), f, sort_keys=False)


def default_config_dict() -> Dict[str, Any]:
    return RunConfig().to_dict()


def read_config_file(config_path: str) -> Dict[str, Any]:
    """Parse a YAML/JSON config file into a dictionary ({} for an empty file)."""
    with open(config_path, "r") as f:
        data = yaml.safe_load(f)
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ValueError(f"config root must be a mapping, got {type(data).__name__}")
    return data


def apply_overrides(data: Dict[str, Any], overrides: Sequence[str]) -> Dict[str, Any]:
    """
    Apply dotted-path overrides such as `solver.lambda=0.5` in place.

    Values are parsed with yaml.safe_load, so `verify.alphas=[1, 0.1]` yields a list.
    """
    for item in overrides:
        if "=" not in item:
            raise ValueError(f"override '{item}' is not of the form key=value")
        key, raw = item.split("=", 1)
        path = [part for part in key.strip().split(".") if part]
        if not path:
            raise ValueError(f"override '{item}' has an empty key")
        node = data
        for part in path[:-1]:
            child = node.get(part)
            if child is None:
                child = {}
                node[part] = child
            if not isinstance(child, dict):
                raise ValueError(f"override '{item}': '{part}' is not a block")
            node = child
        node[path[-1]] = yaml.safe_load(raw)
    return data


def merged_config_dict(data: Dict[str, Any]) -> Dict[str, Any]:
    """User data laid over the defaults, block by block (for validation and archiving)."""
    merged = default_config_dict()
    for block_name, block in data.items():
        if isinstance(block, dict) and isinstance(merged.get(block_name), dict):
            merged[block_name].update(block)
        else:
            merged[block_name] = block
    return merged
