"""
Input schema - validation of the YAML run configuration.
Every offending key is collected so one run reports all problems at once.
"""

import math
from numbers import Integral, Real
from typing import Any, Dict, List, Optional, Tuple

from ..core.config import BLOCKS, default_config_dict, merged_config_dict
from ..core.constants import DomainKind, QuadratureKind, RhsKind, SolverMode, WeightKind
from ..weights.scalar import PHI_FUNCTIONS, PSI_FUNCTIONS

SHIPPED_DOMAINS = [k.value for k in DomainKind if k != DomainKind.GENERIC]
BASE_QUADRATURES = [QuadratureKind.TENSOR_GAUSS_HERMITE.value, QuadratureKind.MONTE_CARLO.value]
OUTPUT_FORMATS = ["csv", "json"]
KEY_ALIASES = {"solver": {"lam": "lambda"}}


def _is_int(value: Any) -> bool:
    return isinstance(value, Integral) and not isinstance(value, bool)


def _is_number(value: Any) -> bool:
    return isinstance(value, Real) and not isinstance(value, bool) and math.isfinite(float(value))


class ConfigSchema:
    """
    Schema of a run configuration.
    Unknown blocks and keys are errors; missing keys take their defaults.
    """

    KEYS: Dict[str, List[str]] = {name: list(block) for name, block in default_config_dict().items()}

    @classmethod
    def validate(cls, data: Dict[str, Any]) -> Tuple[bool, List[str]]:
        """
        Validate a raw configuration mapping (before defaults are merged).
        Returns (is_valid, list_of_errors).
        """
        errors: List[str] = []
        if not isinstance(data, dict):
            return False, [f"config root must be a mapping, got {type(data).__name__}"]

        for block_name, block in data.items():
            if block_name not in BLOCKS:
                errors.append(f"{block_name}: unknown block (expected one of {sorted(BLOCKS)})")
                continue
            if block is None:
                continue
            if not isinstance(block, dict):
                errors.append(f"{block_name}: must be a mapping")
                continue
            aliases = KEY_ALIASES.get(block_name, {})
            for key in block:
                if aliases.get(key, key) not in cls.KEYS[block_name]:
                    errors.append(f"{block_name}.{key}: unknown key")
        if errors:
            return False, errors

        cfg = merged_config_dict({k: v for k, v in data.items() if v is not None})
        for alias, canonical in KEY_ALIASES["solver"].items():
            if alias in cfg["solver"]:
                cfg["solver"][canonical] = cfg["solver"].pop(alias)

        n = cls._validate_model(cfg["model"], errors)
        cls._validate_domain(cfg["domain"], n, errors)
        cls._validate_weight(cfg["weight"], errors)
        cls._validate_solver(cfg["solver"], cfg["domain"], n, errors)
        cls._validate_verify(cfg["verify"], errors)
        cls._validate_output(cfg["output"], errors)
        return len(errors) == 0, errors

    # ------------------------------------------------------------------
    # blocks
    # ------------------------------------------------------------------

    @staticmethod
    def _validate_model(model: Dict[str, Any], errors: List[str]) -> Optional[int]:
        n = model.get("n")
        if not _is_int(n) or n < 1:
            errors.append(f"model.n must be an integer >= 1, got {n!r}")
            n = None
        seed = model.get("seed")
        if not _is_int(seed) or not 0 <= seed < 2 ** 64:
            errors.append(f"model.seed must be an unsigned 64-bit integer, got {seed!r}")
        return n

    @staticmethod
    def _validate_pairs(name: str, pairs: Any, errors: List[str], positive_total: bool) -> None:
        if not isinstance(pairs, list) or not pairs:
            errors.append(f"{name} must be a non-empty list of [node, mass] pairs")
            return
        total = 0.0
        for i, pair in enumerate(pairs):
            if not isinstance(pair, (list, tuple)) or len(pair) != 2 or not all(_is_number(v) for v in pair):
                errors.append(f"{name}[{i}] must be a [node, mass] pair of numbers, got {pair!r}")
                continue
            node, mass = float(pair[0]), float(pair[1])
            if not 0.0 <= node <= 1.0:
                errors.append(f"{name}[{i}] node must lie in [0, 1], got {node}")
            if positive_total and mass < 0.0:
                errors.append(f"{name}[{i}] mass must be nonnegative, got {mass}")
            total += abs(mass)
        if total == 0.0:
            errors.append(f"{name} has zero total mass")

    @classmethod
    def _validate_domain(cls, domain: Dict[str, Any], n: Optional[int], errors: List[str]) -> None:
        kind = domain.get("kind")
        if kind not in SHIPPED_DOMAINS:
            errors.append(f"domain.kind must be one of {SHIPPED_DOMAINS}, got {kind!r}")
        if not _is_number(domain.get("c")):
            errors.append(f"domain.c must be a number, got {domain.get('c')!r}")
        r = domain.get("r")
        if not _is_number(r) or r <= 0:
            errors.append(f"domain.r must be positive, got {r!r}")
        a = domain.get("a")
        if a is not None:
            if not isinstance(a, list) or not all(_is_number(v) for v in a):
                errors.append("domain.a must be a list of numbers")
            else:
                if n is not None and len(a) != n:
                    errors.append(f"domain.a must have {n} entries (model.n), got {len(a)}")
                if all(float(v) == 0.0 for v in a):
                    errors.append("domain.a must be nonzero")
        if domain.get("sigma") is not None:
            cls._validate_pairs("domain.sigma", domain["sigma"], errors, positive_total=False)

    @classmethod
    def _validate_weight(cls, weight: Dict[str, Any], errors: List[str]) -> None:
        kinds = [k.value for k in WeightKind]
        if weight.get("kind") not in kinds:
            errors.append(f"weight.kind must be one of {kinds}, got {weight.get('kind')!r}")
        if weight.get("phi") not in PHI_FUNCTIONS:
            errors.append(f"weight.phi must be one of {sorted(PHI_FUNCTIONS)}, got {weight.get('phi')!r}")
        if weight.get("psi") not in PSI_FUNCTIONS:
            errors.append(f"weight.psi must be one of {sorted(PSI_FUNCTIONS)}, got {weight.get('psi')!r}")
        cls._validate_pairs("weight.tau", weight.get("tau"), errors, positive_total=True)
        xi_nodes = weight.get("xi_nodes")
        if not _is_int(xi_nodes) or xi_nodes < 1:
            errors.append(f"weight.xi_nodes must be an integer >= 1, got {xi_nodes!r}")
        curvature = weight.get("curvature")
        if not _is_number(curvature) or curvature <= 0:
            errors.append(f"weight.curvature must be positive, got {curvature!r}")
        if not isinstance(weight.get("exact"), bool):
            errors.append("weight.exact must be true or false")
        growth = weight.get("growth")
        if growth is not None:
            if not isinstance(growth, dict) or set(growth) - {"C", "beta"}:
                errors.append("weight.growth must be a mapping with keys C and beta")
            else:
                if not _is_number(growth.get("C")) or growth["C"] <= 0:
                    errors.append(f"weight.growth.C must be positive, got {growth.get('C')!r}")
                if not _is_number(growth.get("beta")) or growth["beta"] < 0:
                    errors.append(f"weight.growth.beta must be nonnegative, got {growth.get('beta')!r}")

    @staticmethod
    def _validate_solver(solver: Dict[str, Any], domain: Dict[str, Any], n: Optional[int],
                         errors: List[str]) -> None:
        degree = solver.get("degree")
        if not _is_int(degree) or degree < 0:
            errors.append(f"solver.degree must be an integer >= 0, got {degree!r}")
        lam = solver.get("lambda")
        if not _is_number(lam) or lam <= 0:
            errors.append(f"solver.lambda must be positive, got {lam!r}")
        modes = [m.value for m in SolverMode]
        mode = solver.get("mode")
        if mode not in modes:
            errors.append(f"solver.mode must be one of {modes}, got {mode!r}")
        elif mode != SolverMode.WHOLE_SPACE.value and domain.get("kind") == DomainKind.NONE.value:
            errors.append(f"solver.mode '{mode}' needs a domain (domain.kind is none)")
        alpha = solver.get("alpha")
        if not _is_number(alpha) or alpha <= 0:
            errors.append(f"solver.alpha must be positive, got {alpha!r}")
        quadrature = solver.get("quadrature")
        if not isinstance(quadrature, dict):
            errors.append("solver.quadrature must be a mapping with kind and resolution")
        else:
            if set(quadrature) - {"kind", "resolution"}:
                errors.append(f"solver.quadrature: unknown keys {sorted(set(quadrature) - {'kind', 'resolution'})}")
            if quadrature.get("kind", BASE_QUADRATURES[0]) not in BASE_QUADRATURES:
                errors.append(f"solver.quadrature.kind must be one of {BASE_QUADRATURES}, "
                              f"got {quadrature.get('kind')!r}")
            resolution = quadrature.get("resolution", 1)
            if not _is_int(resolution) or resolution < 1:
                errors.append(f"solver.quadrature.resolution must be an integer >= 1, got {resolution!r}")
        mc_samples = solver.get("mc_samples")
        if not _is_int(mc_samples) or mc_samples < 1:
            errors.append(f"solver.mc_samples must be an integer >= 1, got {mc_samples!r}")

        rhs = solver.get("rhs")
        kinds = [k.value for k in RhsKind]
        if not isinstance(rhs, dict) or rhs.get("kind", RhsKind.HERMITE.value) not in kinds:
            errors.append(f"solver.rhs.kind must be one of {kinds}")
        elif rhs.get("kind", RhsKind.HERMITE.value) == RhsKind.HERMITE.value:
            index = rhs.get("index", [1])
            if not isinstance(index, list) or not all(_is_int(k) and k >= 0 for k in index):
                errors.append("solver.rhs.index must be a list of nonnegative integers")
            elif n is not None and len(index) > n:
                errors.append(f"solver.rhs.index has {len(index)} entries, model.n is {n}")
        elif rhs["kind"] == RhsKind.CONSTANT.value and not _is_number(rhs.get("value", 1.0)):
            errors.append("solver.rhs.value must be a number")
        elif rhs["kind"] == RhsKind.LINEAR.value:
            b = rhs.get("b")
            if b is not None and (not isinstance(b, list) or not all(_is_number(v) for v in b)
                                  or (n is not None and len(b) != n)):
                errors.append(f"solver.rhs.b must be a list of {n} numbers")

    @staticmethod
    def _validate_verify(verify: Dict[str, Any], errors: List[str]) -> None:
        alphas = verify.get("alphas")
        if not isinstance(alphas, list) or not alphas or not all(_is_number(a) for a in alphas):
            errors.append("verify.alphas must be a non-empty list of numbers")
        else:
            if any(a <= 0 for a in alphas):
                errors.append("verify.alphas must be positive")
            if any(b >= a for a, b in zip(alphas, alphas[1:])):
                errors.append("verify.alphas must be strictly decreasing")
        degrees = verify.get("degrees")
        if not isinstance(degrees, list) or not degrees or not all(_is_int(d) and d >= 0 for d in degrees):
            errors.append("verify.degrees must be a non-empty list of integers >= 0")
        for key, minimum in (("boundary_resolution", 1), ("ibp_cases", 0), ("identity_k", 1),
                             ("prox_cases", 1), ("projection_cases", 1), ("membership_samples", 1)):
            value = verify.get(key)
            if not _is_int(value) or value < minimum:
                errors.append(f"verify.{key} must be an integer >= {minimum}, got {value!r}")
        for key in ("bound_tol", "stderr_multiplier"):
            value = verify.get(key)
            if not _is_number(value) or value < 0:
                errors.append(f"verify.{key} must be nonnegative, got {value!r}")
        hmax = verify.get("hessian_ratio_max")
        if not _is_number(hmax) or hmax <= 0:
            errors.append(f"verify.hessian_ratio_max must be positive, got {hmax!r}")
        resolution = verify.get("resolution")
        if resolution is not None and (not _is_int(resolution) or resolution < 1):
            errors.append(f"verify.resolution must be an integer >= 1, got {resolution!r}")

    @staticmethod
    def _validate_output(output: Dict[str, Any], errors: List[str]) -> None:
        if not isinstance(output.get("directory"), str) or not output["directory"]:
            errors.append("output.directory must be a non-empty string")
        formats = output.get("formats")
        if not isinstance(formats, list) or any(f not in OUTPUT_FORMATS for f in formats):
            errors.append(f"output.formats must be a list drawn from {OUTPUT_FORMATS}")


def validate_config(data: Dict[str, Any]) -> Tuple[bool, List[str]]:
    """Validate a raw configuration mapping."""
    return ConfigSchema.validate(data)
