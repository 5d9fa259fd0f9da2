import shutil

import validate_repo


def test_repository_is_valid(capsys):
    assert validate_repo.main() == 0
    out = capsys.readouterr().out
    assert "[OK] qubit_luders.json" in out
    assert "[OK] mixed_qubit.json" in out


def test_invalid_scenario_fails_validation(tmp_path, capsys):
    for folder in ("config", "schemas"):
        shutil.copytree(validate_repo.ROOT / folder, tmp_path / folder)
    (tmp_path / "scenarios").mkdir()
    (tmp_path / "scenarios" / "broken.json").write_text(
        '{"dimension": 2, "observables": {"A": {"x0": "ghost"}}}', encoding="utf-8"
    )
    assert validate_repo.main(tmp_path) == 1
    assert "[FAIL] broken.json" in capsys.readouterr().out


def test_missing_files_fail_validation(tmp_path):
    assert validate_repo.main(tmp_path) == 1
