#
# Check results and run reports. A Report is validated against
# schemas/report.schema.json before it is written, the same way the JSON
# assets of the repository are validated.
#
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List

import jsonschema

REPORT_SCHEMA_PATH = Path(__file__).resolve().parent.parent / "schemas" / "report.schema.json"

PASS = "pass"
FAIL = "fail"
INFO = "info"


def json_load(path: Path):
    with Path(path).open("r", encoding="utf-8") as f:
        return json.load(f)


def json_dump_pretty(data: dict, path: Path) -> None:
    with Path(path).open("w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, ensure_ascii=False)
        f.write("\n")


def _finite(value: float) -> float | None:
    return None if value is None or not math.isfinite(value) else float(value)


@dataclass
class CheckResult:
    """One named identity or property, evaluated over ``trials`` instances."""

    check: str
    params: Dict[str, Any] = field(default_factory=dict)
    trials: int = 0
    failures: List[Dict[str, Any]] = field(default_factory=list)
    max_residual: float = 0.0
    status: str = PASS
    citation: str = ""
    notes: List[str] = field(default_factory=list)

    def observe(self, residual: float, tol: float, witness: Dict[str, Any] | None = None) -> bool:
        """Record one residual; a residual above ``tol`` becomes a failure."""
        self.trials += 1
        if not math.isfinite(residual):
            residual = math.inf
        self.max_residual = max(self.max_residual, residual)
        if residual > tol:
            self.failures.append({**(witness or {}), "residual": _finite(residual)})
            self.status = FAIL
            return False
        return True

    def fail(self, witness: Dict[str, Any]) -> None:
        self.failures.append(witness)
        self.status = FAIL

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["max_residual"] = _finite(self.max_residual)
        return data


@dataclass
class Report:
    command: str
    seed: int | None = None
    trials: int | None = None
    tol: float | None = None
    results: List[CheckResult] = field(default_factory=list)
    wall_time: float = 0.0

    def add(self, result: CheckResult) -> CheckResult:
        self.results.append(result)
        return result

    def extend(self, results: List[CheckResult]) -> None:
        self.results.extend(results)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failed(self) -> List[CheckResult]:
        return [r for r in self.results if not r.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "seed": self.seed,
            "trials": self.trials,
            "tol": self.tol,
            "passed": self.passed,
            "results": [r.to_dict() for r in self.results],
            "wall_time": round(self.wall_time, 6),
        }

    def validate(self, schema_path: Path = REPORT_SCHEMA_PATH) -> None:
        """Raise ``jsonschema.ValidationError`` if the report is malformed."""
        jsonschema.validate(instance=self.to_dict(), schema=json_load(schema_path))

    def write(self, path: Path | str) -> Path:
        self.validate()
        path = Path(path)
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        json_dump_pretty(self.to_dict(), path)
        return path

    def summary_lines(self) -> List[str]:
        lines = []
        for r in self.results:
            tag = "[PASS]" if r.status == PASS else "[FAIL]" if r.status == FAIL else "[INFO]"
            residual = "inf" if not math.isfinite(r.max_residual) else f"{r.max_residual:.3e}"
            cite = f"  ({r.citation})" if r.citation else ""
            lines.append(f"{tag} {r.check}: trials={r.trials} max_residual={residual}{cite}")
            lines.extend(f"       note: {note}" for note in r.notes)
        return lines
