import pytest

from src import config
from src.config import Tolerance
from src.errors import ValidationError


def test_packaged_defaults():
    assert config.default_tolerance().eps == 1e-9
    run = config.run_defaults()
    assert (run["seed"], run["trials"], run["tol"]) == (42, 100, 1e-9)
    assert config.extension_label() == "⊥ext"
    assert config.product_separator() == "⊗"
    assert {"product_factor", "commutator_factor", "search_scale"} <= set(config.suite_settings())


def test_environment_overrides_the_tolerance(monkeypatch):
    monkeypatch.setenv(config.TOL_ENV_VAR, "1e-7")
    config.default_tolerance.cache_clear()
    assert config.default_tolerance().eps == 1e-7
    assert config.run_defaults()["tol"] == 1e-7
    assert config.resolve(None).eps == 1e-7


def test_malformed_environment_tolerance(monkeypatch):
    monkeypatch.setenv(config.TOL_ENV_VAR, "tiny")
    config.default_tolerance.cache_clear()
    with pytest.raises(ValidationError, match="QMI_TOL"):
        config.default_tolerance()


def test_resolve_accepts_numbers_and_tolerances():
    assert config.resolve(1e-3) == Tolerance(1e-3)
    tol = Tolerance(1e-4)
    assert config.resolve(tol) is tol
    with pytest.raises(ValidationError):
        Tolerance(0.0)
