import json
import math

import jsonschema
import pytest

from src.report import FAIL, INFO, PASS, CheckResult, Report


def test_observe_records_failures_above_tolerance():
    result = CheckResult("identity")
    assert result.observe(1e-12, 1e-9, {"trial": 0})
    assert not result.observe(1e-6, 1e-9, {"trial": 1})
    assert result.status == FAIL
    assert result.trials == 2
    assert result.max_residual == pytest.approx(1e-6)
    assert result.failures == [{"trial": 1, "residual": 1e-6}]


def test_non_finite_residuals_become_null():
    result = CheckResult("identity")
    result.observe(math.nan, 1e-9)
    data = result.to_dict()
    assert data["max_residual"] is None
    assert data["failures"][0]["residual"] is None


def test_info_results_do_not_fail_the_report():
    report = Report(command="search", seed=1, trials=2, tol=1e-9)
    report.add(CheckResult("search", status=INFO, failures=[{"trial": 0}]))
    assert report.passed
    report.add(CheckResult("broken", status=FAIL))
    assert not report.passed
    assert [r.check for r in report.failed] == ["broken"]


def test_write_validates_and_round_trips(tmp_path):
    report = Report(command="verify", seed=42, trials=1, tol=1e-9)
    report.add(CheckResult("duality", trials=1, max_residual=1e-16, citation="tr[ρ I*(Δ)(a)] = tr[I(Δ)(ρ) a]"))
    report.wall_time = 0.5
    path = report.write(tmp_path / "nested" / "report.json")
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data["passed"] is True
    assert data["results"][0]["status"] == PASS
    assert data["results"][0]["citation"].startswith("tr[ρ")


def test_malformed_report_is_rejected(tmp_path):
    with pytest.raises(jsonschema.ValidationError):
        Report(command="plot").write(tmp_path / "bad.json")
    assert not (tmp_path / "bad.json").exists()


def test_summary_lines_tag_each_result():
    report = Report(command="verify")
    ok = report.add(CheckResult("a", citation="x = x"))
    bad = report.add(CheckResult("b"))
    bad.observe(1.0, 1e-9)
    bad.notes.append("look here")
    report.add(CheckResult("c", status=INFO))
    lines = report.summary_lines()
    assert lines[0].startswith("[PASS] a") and "(x = x)" in lines[0]
    assert lines[1].startswith("[FAIL] b")
    assert "note: look here" in lines[2]
    assert lines[3].startswith("[INFO] c")
    assert ok.passed
