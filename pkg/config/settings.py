"""
Settings - Environment-based process configuration.
Loads settings from a .env file and environment variables; run parameters live in
the YAML run configuration instead (core.config.RunConfig).
"""

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

from ..core.constants import DEFAULT_MC_SAMPLES, TENSOR_NODE_BUDGET

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def _load_env_file(env_path: Optional[str] = None) -> Dict[str, str]:
    """Load KEY=VALUE pairs from the first .env file found."""
    env_vars = {}

    search_paths = [
        env_path,
        Path.cwd() / ".env",
        Path(__file__).parent.parent / ".env",
        Path.home() / ".gaussian_lab" / ".env",
    ]

    for path in search_paths:
        if path and Path(path).exists():
            with open(path, "r") as f:
                for line in f:
                    line = line.strip()
                    if line and not line.startswith("#") and "=" in line:
                        key, value = line.split("=", 1)
                        env_vars[key.strip()] = value.strip()
            break

    return env_vars


def _get_env(key: str, default: Any = None, env_vars: Dict[str, str] = None) -> str:
    """Environment variables win over the .env file."""
    if key in os.environ:
        return os.environ[key]
    if env_vars and key in env_vars:
        return env_vars[key]
    return default


@dataclass
class LogSettings:
    """Logging configuration."""
    level: str = "INFO"
    file: Optional[str] = None


@dataclass
class ComputeSettings:
    """Resource caps for the numerical kernels."""
    threads: int = 1
    tensor_node_budget: int = TENSOR_NODE_BUDGET
    mc_samples: int = DEFAULT_MC_SAMPLES


@dataclass
class Settings:
    """Main settings container."""
    log: LogSettings = field(default_factory=LogSettings)
    compute: ComputeSettings = field(default_factory=ComputeSettings)

    @classmethod
    def load(cls, env_path: Optional[str] = None) -> "Settings":
        """Load settings from environment."""
        env_vars = _load_env_file(env_path)

        def get(key: str, default: Any = None) -> str:
            return _get_env(key, default, env_vars)

        return cls(
            log=LogSettings(
                level=str(get("LOG_LEVEL", "INFO")).upper(),
                file=get("LOG_FILE") or None,
            ),
            compute=ComputeSettings(
                threads=max(1, int(get("LAB_THREADS", "1"))),
                tensor_node_budget=int(get("LAB_TENSOR_NODE_BUDGET", str(TENSOR_NODE_BUDGET))),
                mc_samples=int(get("LAB_MC_SAMPLES", str(DEFAULT_MC_SAMPLES))),
            ),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "log": {"level": self.log.level, "file": self.log.file},
            "compute": {
                "threads": self.compute.threads,
                "tensor_node_budget": self.compute.tensor_node_budget,
                "mc_samples": self.compute.mc_samples,
            },
        }


_logging_configured = False


def configure_logging(settings: Optional[Settings] = None, force: bool = False) -> None:
    """Install stream (and optional file) handlers on the root logger once per process."""
    global _logging_configured
    if _logging_configured and not force:
        return
    settings = settings or get_settings()
    root = logging.getLogger()
    level = getattr(logging, settings.log.level, logging.INFO)
    root.setLevel(level)
    formatter = logging.Formatter(LOG_FORMAT)
    stream = logging.StreamHandler()
    stream.setFormatter(formatter)
    root.addHandler(stream)
    if settings.log.file:
        file_handler = logging.FileHandler(settings.log.file)
        file_handler.setFormatter(formatter)
        root.addHandler(file_handler)
    _logging_configured = True


# Global settings instance
_settings: Optional[Settings] = None


def get_settings(env_path: Optional[str] = None) -> Settings:
    """Get global settings instance (singleton)."""
    global _settings
    if _settings is None:
        _settings = Settings.load(env_path)
    return _settings


def reload_settings(env_path: Optional[str] = None) -> Settings:
    """Force reload settings from environment."""
    global _settings
    _settings = Settings.load(env_path)
    return _settings
