#!/usr/bin/env python3
"""
Command-line interface: ``qmi verify``, ``qmi demo`` and ``qmi search``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for bad input
(unreadable or invalid scenario, unknown demo or family, bad flags).
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from .demos import DEMOS, run_demo
from .errors import QMIError
from .report import Report
from .runner import run_search, run_verify
from .scenario import load_scenario
from .suites import SUITES

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def _non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmi", description="Quantum measurement identity checker")
    parser.add_argument("--log-level", default="WARNING", choices=LOG_LEVELS, help="Logging verbosity")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="Run property suites on a scenario")
    verify.add_argument("scenario", type=Path, help="Scenario JSON file")
    verify.add_argument("--seed", type=int, help="Base seed; trial i uses seed + i")
    verify.add_argument("--trials", type=_non_negative_int, help="Trials per check")
    verify.add_argument("--tol", type=_positive_float, help="Residual threshold")
    verify.add_argument("--report", type=Path, help="Write the JSON report here")
    verify.add_argument("--suite", dest="suites", action="append", choices=list(SUITES),
                        help="Run only this suite (repeatable); default: the scenario's checks, else all")

    demo = sub.add_parser("demo", help="Reproduce one worked qubit example")
    demo.add_argument("name", help=f"One of {', '.join(DEMOS)}")
    demo.add_argument("--tol", type=_positive_float, help="Residual threshold")
    demo.add_argument("--report", type=Path, help="Write the JSON report here")

    search = sub.add_parser("search", help="Search a Lüders family for Sob-closure failures")
    search.add_argument("scenario", type=Path, help="Scenario JSON file")
    search.add_argument("--family", required=True, help="Observable (or Lüders instrument) naming the family")
    search.add_argument("--trials", type=_non_negative_int, help="Random pairs to try")
    search.add_argument("--seed", type=int, help="Base seed")
    search.add_argument("--report", type=Path, help="Write the JSON report here")
    return parser


def _execute(args: argparse.Namespace) -> Report:
    if args.command == "verify":
        scenario = load_scenario(args.scenario)
        return run_verify(scenario, seed=args.seed, trials=args.trials, tol=args.tol, suites=args.suites)
    if args.command == "demo":
        return run_demo(args.name, tol=args.tol)
    scenario = load_scenario(args.scenario)
    return run_search(scenario, args.family, seed=args.seed, trials=args.trials)


def _emit(report: Report, path: Optional[Path]) -> None:
    for line in report.summary_lines():
        print(line)
    if path is not None:
        written = report.write(path)
        print(f"[OK] Report written to {written}")
    failed = report.failed
    if failed:
        print(f"[FAIL] {len(failed)} of {len(report.results)} check(s) failed")
    elif report.command == "search":
        print(f"[OK] Search finished: {len(report.results[0].failures)} candidate(s)")
    else:
        print(f"[PASS] {len(report.results)} check(s) passed in {report.wall_time:.2f}s")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), format="%(levelname)s %(name)s: %(message)s")
    try:
        report = _execute(args)
    except QMIError as exc:
        print(f"[FAIL] {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except OSError as exc:
        print(f"[FAIL] {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    try:
        _emit(report, args.report)
    except OSError as exc:
        print(f"[FAIL] cannot write report: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
