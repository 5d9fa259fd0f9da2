"""
Run configuration for qmi.

Defaults live in ``config/defaults.json``. A ``.env`` file (or the process
environment) may set ``QMI_TOL`` to override the default tolerance used for
construction-time validation and as the default residual threshold.
"""
from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict

from dotenv import load_dotenv

from .errors import ValidationError

DEFAULTS_PATH = Path(__file__).resolve().parent.parent / "config" / "defaults.json"
TOL_ENV_VAR = "QMI_TOL"

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Tolerance:
    """Absolute tolerance for operator comparisons."""

    eps: float

    def __post_init__(self) -> None:
        if not self.eps > 0:
            raise ValidationError(f"tolerance must be positive, got {self.eps!r}")


@lru_cache(maxsize=1)
def load_defaults() -> Dict[str, Any]:
    """Load ``config/defaults.json`` once per process."""
    with DEFAULTS_PATH.open(encoding="utf-8") as f:
        return json.load(f)


@lru_cache(maxsize=1)
def default_tolerance() -> Tolerance:
    """Default tolerance, honouring ``QMI_TOL`` from the environment or ``.env``."""
    load_dotenv()
    raw = os.environ.get(TOL_ENV_VAR)
    if raw:
        try:
            eps = float(raw)
        except ValueError as exc:
            raise ValidationError(f"{TOL_ENV_VAR}={raw!r} is not a number") from exc
        logger.info("Tolerance overridden by %s=%s", TOL_ENV_VAR, raw)
        return Tolerance(eps)
    return Tolerance(float(load_defaults()["numerics"]["eps"]))


def resolve(tol: Tolerance | float | None) -> Tolerance:
    """Normalise an optional tolerance argument."""
    if tol is None:
        return default_tolerance()
    if isinstance(tol, Tolerance):
        return tol
    return Tolerance(float(tol))


def run_defaults() -> Dict[str, Any]:
    """Seed, trials and tol used when neither scenario nor CLI set them."""
    run = dict(load_defaults()["run"])
    run["tol"] = default_tolerance().eps if os.environ.get(TOL_ENV_VAR) else run["tol"]
    return run


def numerics() -> Dict[str, Any]:
    return load_defaults()["numerics"]


def extension_label() -> str:
    return load_defaults()["outcomes"]["extension_label"]


def product_separator() -> str:
    return load_defaults()["outcomes"]["product_separator"]


def suite_settings() -> Dict[str, Any]:
    """Threshold factors and sample sizes used by the verification suites."""
    return load_defaults()["suites"]
