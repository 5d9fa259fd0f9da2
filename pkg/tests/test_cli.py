import json

import pytest

from src.cli import EXIT_CHECK_FAILED, EXIT_INPUT_ERROR, EXIT_OK, main


def test_demo_passes(capsys):
    assert main(["demo", "example1"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "[PASS] example1." in out
    assert "example1: " in out


def test_unknown_demo_is_an_input_error(capsys):
    assert main(["demo", "example42"]) == EXIT_INPUT_ERROR
    assert "[FAIL]" in capsys.readouterr().err


def test_verify_writes_a_valid_report(scenario_dir, tmp_path, capsys):
    path = tmp_path / "verify.json"
    code = main(["verify", str(scenario_dir / "qubit_luders.json"), "--trials", "2",
                 "--suite", "duality", "--suite", "thm32", "--report", str(path)])
    assert code == EXIT_OK
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data["command"] == "verify"
    assert data["seed"] == 7
    assert data["trials"] == 2
    assert data["passed"] is True
    assert "[OK] Report written to" in capsys.readouterr().out


def test_verify_at_the_default_seed_and_scale_exits_zero(scenario_dir, capsys):
    code = main(["verify", str(scenario_dir / "qubit_luders.json"), "--seed", "42", "--trials", "100"])
    out = capsys.readouterr().out
    assert "[FAIL]" not in out
    assert code == EXIT_OK


def test_impossible_tolerance_fails_the_run(scenario_dir, tmp_path):
    path = tmp_path / "strict.json"
    code = main(["verify", str(scenario_dir / "qubit_luders.json"), "--trials", "2",
                 "--suite", "duality", "--tol", "1e-30", "--report", str(path)])
    assert code == EXIT_CHECK_FAILED
    data = json.loads(path.read_text(encoding="utf-8"))
    failures = [f for r in data["results"] for f in r["failures"]]
    assert failures and all("residual" in f for f in failures)


def test_zero_trials_is_an_empty_passing_run(scenario_dir, tmp_path):
    path = tmp_path / "empty.json"
    code = main(["verify", str(scenario_dir / "qubit_luders.json"), "--trials", "0", "--report", str(path)])
    assert code == EXIT_OK
    assert json.loads(path.read_text(encoding="utf-8"))["results"] == []


def test_invalid_scenario_is_an_input_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"dimension": 2, "effects": {"e": [[[2, 0], [0, 0]], [[0, 0], [0, 0]]]}}', encoding="utf-8")
    assert main(["verify", str(bad)]) == EXIT_INPUT_ERROR
    assert "effect 'e'" in capsys.readouterr().err
    assert main(["verify", str(tmp_path / "missing.json")]) == EXIT_INPUT_ERROR


def test_bad_flags_exit_with_usage_error(scenario_dir):
    with pytest.raises(SystemExit) as excinfo:
        main(["verify", str(scenario_dir / "qubit_luders.json"), "--trials", "-1"])
    assert excinfo.value.code == 2
    with pytest.raises(SystemExit):
        main(["verify", str(scenario_dir / "qubit_luders.json"), "--suite", "thm99"])


def test_search_reports_candidates(scenario_dir, capsys):
    code = main(["search", str(scenario_dir / "qubit_luders.json"), "--family", "L_sharp", "--trials", "3"])
    assert code == EXIT_OK
    assert "[OK] Search finished: 0 candidate(s)" in capsys.readouterr().out


def test_search_with_unknown_family_is_an_input_error(scenario_dir, capsys):
    code = main(["search", str(scenario_dir / "qubit_luders.json"), "--family", "nope", "--trials", "1"])
    assert code == EXIT_INPUT_ERROR
    assert "unknown search family" in capsys.readouterr().err
