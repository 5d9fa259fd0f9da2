import time

import pytest

from src.scenario import load_scenario
from src.suites import SUITES, SuiteContext


def failures_of(results):
    return {r.check: r.failures[:3] for r in results if not r.passed}


def test_registry_lists_every_suite():
    assert list(SUITES) == [
        "duality", "lemma21", "thm32", "thm33", "thm34", "thm36", "thm41",
        "convexity", "sob-closure", "extensions", "measured", "axioms", "eq32",
    ]


@pytest.mark.parametrize("name", list(SUITES))
def test_suite_passes_on_seeded_inputs(name):
    results = SUITES[name](SuiteContext(seed=5, trials=3, tol=1e-9))
    assert results, f"{name} produced no checks"
    assert not failures_of(results)
    assert all(r.citation for r in results)


@pytest.mark.parametrize("name", list(SUITES))
def test_suite_with_zero_trials_reports_no_failures(name):
    results = SUITES[name](SuiteContext(seed=5, trials=0, tol=1e-9))
    assert all(r.passed for r in results)
    assert all(r.trials == 0 for r in results if r.check.startswith(("duality", "lemma21", "composition")))


def test_suites_cover_named_scenario_instruments(scenario_dir):
    scenario = load_scenario(scenario_dir / "mixed_qubit.json")
    ctx = SuiteContext(seed=1, trials=2, tol=1e-9, instruments=dict(scenario.instruments))
    assert set(ctx.named_instruments()) == {"H", "FH", "CS", "damping"}
    for name in ("duality", "thm33", "thm41", "measured", "convexity"):
        results = SUITES[name](ctx)
        assert not failures_of(results), name
    closure = {r.check for r in SUITES["thm33"](ctx)}
    assert "sob-closure[H]" in closure
    assert "convexity[damping]" in {r.check for r in SUITES["convexity"](ctx)}


def test_impossible_tolerance_reports_failures_with_residuals():
    results = SUITES["duality"](SuiteContext(seed=5, trials=5, tol=1e-30))
    failed = [r for r in results if not r.passed]
    assert failed
    assert all("residual" in f for r in failed for f in r.failures)


def test_expected_violations_are_reported_as_passing_checks():
    results = {r.check: r for r in SUITES["axioms"](SuiteContext(seed=0, trials=1, tol=1e-9))}
    detected = results["axioms[detects-nonzero-orthogonal-to-one]"]
    assert detected.passed
    assert "E4" in detected.notes[0]
    convexity = {r.check: r for r in SUITES["convexity"](SuiteContext(seed=0, trials=2, tol=1e-9))}
    assert convexity["convexity[two-point]"].passed
    assert convexity["convexity[two-point]"].params["expect_convex"] is False


def test_commuting_identities_use_the_wider_threshold():
    ctx = SuiteContext(seed=0, trials=1, tol=1e-9)
    assert ctx.product_tol == pytest.approx(1e-8)
    assert ctx.commutator_tol == pytest.approx(1e-6)
    results = {r.check: r for r in SUITES["thm36"](ctx)}
    assert results["determined-product-5"].params["threshold"] == pytest.approx(1e-8)
    assert results["determined-product-1"].params["threshold"] == pytest.approx(1e-9)


def test_sharp_luders_witness_is_exact_at_the_default_seed():
    results = {r.check: r for r in SUITES["sob-closure"](SuiteContext(seed=42, trials=100, tol=1e-9))}
    sharp = results["sob-closure[sharp-luders]"]
    assert sharp.passed, sharp.failures[:3]
    assert sharp.max_residual <= 1e-9


@pytest.mark.parametrize("seed", [7, 1234])
def test_constant_state_search_witnesses_are_refined(seed):
    results = {r.check: r for r in SUITES["thm34"](SuiteContext(seed=seed, trials=100, tol=1e-9))}
    general = results["sob-closure[constant-state-general]"]
    assert general.passed, general.failures[:3]
    assert general.max_residual <= 1e-9


# Runtime ceilings per suite at 100 trials; suites without a stated ceiling get 10 s.
RUNTIME_LIMITS = {"duality": 5.0, "lemma21": 5.0}


@pytest.mark.parametrize("name", list(SUITES))
def test_suites_pass_at_full_scale_within_their_runtime(name, scenario_dir):
    scenario = load_scenario(scenario_dir / "qubit_luders.json")
    ctx = SuiteContext(seed=42, trials=100, tol=1e-9, instruments=dict(scenario.instruments))
    start = time.perf_counter()
    results = SUITES[name](ctx)
    elapsed = time.perf_counter() - start
    assert not failures_of(results)
    assert elapsed < RUNTIME_LIMITS.get(name, 10.0)
