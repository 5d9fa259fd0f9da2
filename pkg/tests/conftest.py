import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))

from src import config  # noqa: E402


@pytest.fixture
def scenario_dir() -> Path:
    return ROOT / "scenarios"


@pytest.fixture(autouse=True)
def default_tolerance(monkeypatch):
    """Every test starts from the packaged tolerance, whatever the shell sets."""
    monkeypatch.delenv(config.TOL_ENV_VAR, raising=False)
    config.default_tolerance.cache_clear()
    yield
    config.default_tolerance.cache_clear()
