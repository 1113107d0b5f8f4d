"""
CLI module - batch front end.
Commands: solve, penalize-sweep, prox-check, project-check, neumann-check, ibp-check, identities

Note: Lazy imports to avoid RuntimeWarning when running as module.
"""

__all__ = [
    "run",
    "HANDLERS",
    "CommandHandler",
    "SolveHandler",
    "PenalizeSweepHandler",
    "ProxCheckHandler",
    "ProjectCheckHandler",
    "NeumannCheckHandler",
    "IbpCheckHandler",
    "IdentitiesHandler",
]

_LOCATIONS = {
    "run": ".runner",
    "HANDLERS": ".runner",
    "CommandHandler": ".base",
    "SolveHandler": ".solve",
    "PenalizeSweepHandler": ".sweep",
    "ProxCheckHandler": ".checks",
    "ProjectCheckHandler": ".checks",
    "NeumannCheckHandler": ".boundary",
    "IbpCheckHandler": ".boundary",
    "IdentitiesHandler": ".identities",
}


def __getattr__(name):
    """Lazy import to avoid circular import warnings."""
    if name in _LOCATIONS:
        from importlib import import_module
        return getattr(import_module(_LOCATIONS[name], __name__), name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
