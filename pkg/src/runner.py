#
# Runs verification suites and the Lüders search for a loaded scenario and
# assembles the results into a Report. Suites run one after another in the
# order requested so that reports are reproducible.
#
from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

from . import config
from .effect_algebra import search_luders_counterexample
from .errors import ScenarioError, UnknownNameError
from .instruments import SubInstrument, measured_observable
from .observables import Observable, is_sharp_observable
from .report import FAIL, INFO, CheckResult, Report
from .scenario import Scenario
from .suites import SUITES, SuiteContext


@dataclass(frozen=True)
class RunSettings:
    seed: int
    trials: int
    tol: float


def resolve_settings(scenario: Scenario | None = None, seed: int | None = None,
                     trials: int | None = None, tol: float | None = None) -> RunSettings:
    """CLI values override the scenario, which overrides ``config/defaults.json``."""
    defaults = config.run_defaults()

    def pick(flag, key):
        if flag is not None:
            return flag
        if scenario is not None and getattr(scenario, key) is not None:
            return getattr(scenario, key)
        return defaults[key]

    return RunSettings(seed=int(pick(seed, "seed")), trials=int(pick(trials, "trials")), tol=float(pick(tol, "tol")))


class VerificationRunner:
    """Executes the requested suites against one scenario."""

    def __init__(self, scenario: Scenario, settings: RunSettings, suites: Optional[Sequence[str]] = None):
        self.logger = logging.getLogger(__name__)
        self.scenario = scenario
        self.settings = settings
        requested = list(suites or scenario.checks or SUITES)
        unknown = [name for name in requested if name not in SUITES]
        if unknown:
            raise UnknownNameError(f"unknown suite(s) {unknown}; expected some of {list(SUITES)}")
        self.suites = requested
        self.context = SuiteContext(
            seed=settings.seed, trials=settings.trials, tol=settings.tol, instruments=dict(scenario.instruments)
        )

    def _run_suite(self, name: str) -> List[CheckResult]:
        self.logger.info("Suite %s: starting (%d trials)", name, self.settings.trials)
        start = time.perf_counter()
        try:
            results = SUITES[name](self.context)
        except Exception as exc:
            self.logger.error("Suite %s raised %s: %s", name, type(exc).__name__, exc)
            failed = CheckResult(name, status=FAIL, citation="suite execution")
            failed.failures.append({"error": f"{type(exc).__name__}: {exc}"})
            return [failed]
        failed = sum(1 for r in results if not r.passed)
        self.logger.info("Suite %s: %d check(s), %d failed, %.2fs", name, len(results), failed,
                         time.perf_counter() - start)
        return results

    def run(self) -> Report:
        report = Report(command="verify", seed=self.settings.seed, trials=self.settings.trials,
                        tol=self.settings.tol)
        start = time.perf_counter()
        if self.settings.trials == 0:
            self.logger.info("Zero trials requested; no suite is run")
        else:
            for name in self.suites:
                report.extend(self._run_suite(name))
        report.wall_time = time.perf_counter() - start
        return report


def run_verify(scenario: Scenario, seed: int | None = None, trials: int | None = None,
               tol: float | None = None, suites: Iterable[str] | None = None) -> Report:
    settings = resolve_settings(scenario, seed, trials, tol)
    return VerificationRunner(scenario, settings, list(suites) if suites else None).run()


def search_family(scenario: Scenario, family: str) -> Observable:
    """The observable A of the Lüders family L_A named ``family``.

    ``family`` is an observable of the scenario, or a Lüders instrument
    whose measured observable is taken. A name that exists but has the
    wrong kind raises :class:`ScenarioError`.
    """
    if family in scenario.observables:
        A = scenario.observables[family]
        if not isinstance(A, Observable):
            raise ScenarioError(f"{family!r} is a sub-observable; a Lüders family needs an observable")
        return A
    instrument: SubInstrument | None = scenario.instruments.get(family)
    if instrument is not None:
        if instrument.kind != "luders":
            raise ScenarioError(f"{family!r} is a {instrument.kind} instrument; a Lüders family needs a luders one")
        return measured_observable(instrument)
    choices = sorted(scenario.observables) + sorted(
        name for name, I in scenario.instruments.items() if I.kind == "luders"
    )
    raise UnknownNameError(f"unknown search family {family!r}; expected one of {choices}")


def run_search(scenario: Scenario, family: str, seed: int | None = None, trials: int | None = None) -> Report:
    """Search L_A for pairs whose sum lies in Sob(H) but has no witness effect."""
    settings = resolve_settings(scenario, seed, trials)
    logger = logging.getLogger(__name__)
    A = search_family(scenario, family)
    start = time.perf_counter()
    scale = float(config.suite_settings()["search_scale"])
    found = search_luders_counterexample(A, settings.trials, settings.seed, scale=scale)
    for candidate in found["candidates"]:
        logger.warning("Candidate counterexample in family %s: trial %d (seed %d)",
                       family, candidate["trial"], candidate["seed"])
    result = CheckResult(
        f"luders-search[{family}]",
        params={
            "admissible": found["admissible"],
            "trivial": found["trivial"],
            "feasible": found["feasible"],
            "feasibility_rate": found["feasibility_rate"],
            "scale": scale,
            "sharp": is_sharp_observable(A),
        },
        trials=found["trials"],
        failures=list(found["candidates"]),
        status=INFO,
        citation="is L_a^* + L_b^* ∈ Sob(H) always some L_c^*?",
    )
    result.notes.append("a candidate is a pair without a witness from the search, not a proven counterexample")
    if not found["measured_ok"]:
        result.notes.append("the Lüders instrument does not reproduce A; check the family")
    report = Report(command="search", seed=settings.seed, trials=settings.trials, tol=settings.tol)
    report.add(result)
    report.wall_time = time.perf_counter() - start
    return report
