"""
Shared fixtures: small truncated models and an isolated settings environment.
"""

import pytest
from hypothesis import settings as hypothesis_settings

from ..config import settings as settings_module
from ..config.settings import reload_settings
from ..core.model import TruncatedModel

hypothesis_settings.register_profile("lab", derandomize=True, deadline=None, max_examples=40)
hypothesis_settings.load_profile("lab")


@pytest.fixture
def model1():
    return TruncatedModel(n=1, seed=11)


@pytest.fixture
def model2():
    return TruncatedModel(n=2, seed=7)


@pytest.fixture
def model3():
    return TruncatedModel(n=3, seed=5)


@pytest.fixture
def lab_env(monkeypatch, tmp_path):
    """Settings read from a throwaway .env so the developer's own file never leaks in."""
    env_file = tmp_path / ".env"
    env_file.write_text("LOG_LEVEL=WARNING\nLAB_THREADS=1\nLAB_MC_SAMPLES=20000\n")
    for key in ("LOG_LEVEL", "LOG_FILE", "LAB_THREADS", "LAB_TENSOR_NODE_BUDGET", "LAB_MC_SAMPLES"):
        monkeypatch.delenv(key, raising=False)
    monkeypatch.chdir(tmp_path)
    monkeypatch.setattr(settings_module, "_settings", None)
    return reload_settings(str(env_file))
