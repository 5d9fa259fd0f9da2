import pytest

from src.demos import DEMOS, demo_results, run_demo
from src.errors import UnknownNameError


def test_all_eight_examples_are_registered():
    assert list(DEMOS) == [f"example{k}" for k in range(1, 9)]


@pytest.mark.parametrize("name", list(DEMOS))
def test_every_displayed_identity_holds(name):
    report = run_demo(name)
    assert report.command == "demo"
    assert report.results
    failed = {r.check: r.max_residual for r in report.results if not r.passed}
    assert not failed
    assert all(r.max_residual <= 1e-9 for r in report.results)


@pytest.mark.parametrize("name", list(DEMOS))
def test_every_result_cites_its_example(name):
    for result in demo_results(name):
        assert result.check.startswith(f"{name}.")
        assert result.citation.startswith(f"{name}: ")


def test_example7_checks_that_conditioning_returns_the_second_instrument():
    checks = {r.check for r in demo_results("example7")}
    assert "example7.conditioned-determined" in checks


def test_example8_covers_both_orders():
    checks = {r.check for r in demo_results("example8")}
    assert "example8.sequential-measured" in checks
    assert "example8.reverse-measured" in checks


def test_demo_report_is_schema_valid(tmp_path):
    path = run_demo("example5").write(tmp_path / "example5.json")
    assert path.exists()


def test_impossible_tolerance_fails_some_identity():
    report = run_demo("example6", tol=1e-30)
    assert not report.passed


def test_unknown_demo_is_rejected():
    with pytest.raises(UnknownNameError, match="example9"):
        run_demo("example9")
