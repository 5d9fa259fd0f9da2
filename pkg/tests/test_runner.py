import json

import pytest

from src import runner as runner_module
from src.errors import ScenarioError, UnknownNameError
from src.observables import Observable, restrict
from src.report import INFO
from src.runner import (
    RunSettings,
    VerificationRunner,
    resolve_settings,
    run_search,
    run_verify,
    search_family,
)
from src.scenario import load_scenario


@pytest.fixture
def qubit(scenario_dir):
    return load_scenario(scenario_dir / "qubit_luders.json")


def test_flags_override_scenario_which_overrides_defaults(qubit):
    assert resolve_settings() == RunSettings(seed=42, trials=100, tol=1e-9)
    assert resolve_settings(qubit) == RunSettings(seed=7, trials=20, tol=1e-9)
    assert resolve_settings(qubit, seed=1, trials=0, tol=1e-6) == RunSettings(seed=1, trials=0, tol=1e-6)


def test_unknown_suite_is_rejected(qubit):
    with pytest.raises(UnknownNameError, match="thm99"):
        VerificationRunner(qubit, RunSettings(1, 1, 1e-9), ["duality", "thm99"])


def test_zero_trials_gives_an_empty_passing_report(qubit, tmp_path):
    report = run_verify(qubit, trials=0)
    assert report.results == []
    assert report.passed
    report.write(tmp_path / "empty.json")


def test_requested_suites_run_in_order(qubit):
    report = run_verify(qubit, trials=2, suites=["eq32", "duality"])
    checks = [r.check for r in report.results]
    assert checks[0] == "sequential-distribution"
    assert checks[1] == "duality"
    assert report.passed


def test_scenario_checks_select_suites(scenario_dir):
    mixed = load_scenario(scenario_dir / "mixed_qubit.json")
    runner = VerificationRunner(mixed, resolve_settings(mixed, trials=1))
    assert runner.suites == mixed.checks


def test_reports_are_deterministic_apart_from_wall_time(qubit):
    def snapshot():
        data = run_verify(qubit, seed=11, trials=3, suites=["duality", "lemma21", "thm41"]).to_dict()
        data.pop("wall_time")
        return json.dumps(data, sort_keys=True)

    assert snapshot() == snapshot()


def test_a_crashing_suite_becomes_a_failed_check(qubit, monkeypatch):
    def boom(ctx):
        raise RuntimeError("kaput")

    monkeypatch.setitem(runner_module.SUITES, "duality", boom)
    report = run_verify(qubit, trials=1, suites=["duality"])
    assert not report.passed
    assert report.results[0].failures == [{"error": "RuntimeError: kaput"}]


def test_search_family_resolution(qubit):
    assert isinstance(search_family(qubit, "A"), Observable)
    assert search_family(qubit, "L").labels == ("x0", "x1")
    with pytest.raises(UnknownNameError, match="expected one of"):
        search_family(qubit, "Z")


def test_search_family_of_the_wrong_kind_is_a_scenario_error(qubit, scenario_dir):
    mixed = load_scenario(scenario_dir / "mixed_qubit.json")
    with pytest.raises(ScenarioError, match="holevo instrument"):
        search_family(mixed, "H")
    partial = restrict(qubit.observables["A"], ("x0",))
    qubit.observables["half"] = partial
    with pytest.raises(ScenarioError, match="sub-observable"):
        search_family(qubit, "half")


def test_search_on_a_sharp_family_finds_no_candidates(qubit):
    report = run_search(qubit, "L_sharp", seed=3, trials=6)
    assert report.command == "search"
    assert report.passed
    (result,) = report.results
    assert result.status == INFO
    assert result.check == "luders-search[L_sharp]"
    assert result.params["sharp"] is True
    assert result.failures == []
    assert result.trials == 6


def test_search_on_an_unsharp_family_reports_feasibility(qubit):
    report = run_search(qubit, "A", seed=3, trials=4)
    result = report.results[0]
    assert result.params["sharp"] is False
    assert 0.0 <= result.params["feasibility_rate"] <= 1.0
    assert result.params["trivial"] <= result.params["admissible"] <= 4
    assert report.passed
