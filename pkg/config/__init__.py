"""
Configuration module.
Provides process-level configuration:
- Environment variables (.env): logging, thread cap, resource budgets
- Shipped YAML run configurations (config/*.yaml)
"""

from pathlib import Path

from .settings import (
    ComputeSettings,
    LogSettings,
    Settings,
    configure_logging,
    get_settings,
    reload_settings,
)

CONFIG_DIR = Path(__file__).parent


def shipped_config(name: str) -> Path:
    """Path of a run configuration shipped in this directory."""
    path = CONFIG_DIR / (name if name.endswith(".yaml") else f"{name}.yaml")
    if not path.exists():
        raise FileNotFoundError(f"no shipped configuration named '{name}'")
    return path


__all__ = [
    "Settings",
    "LogSettings",
    "ComputeSettings",
    "get_settings",
    "reload_settings",
    "configure_logging",
    "CONFIG_DIR",
    "shipped_config",
]
