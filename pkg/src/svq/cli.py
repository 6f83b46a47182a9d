"""Command line interface.

Exit codes: 0 on success, 1 when a past-fixity check found violations
(so CI can assert the past stayed fixed), 2 on any error.
"""

from __future__ import annotations

import argparse
import sys

from .errors import SvqError
from .runner import emit_report, run_scenario
from .scenario import parse_scenario


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="svq",
        description="Run scenarios over three-valued quantum propositions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a scenario file and print its report")
    run_p.add_argument("file", help="scenario file (.svq)")
    run_p.add_argument("--seed", type=int, default=None, help="seed for random steps")
    run_p.add_argument("--tol", type=float, default=None, help="numeric tolerance")
    run_p.add_argument("--format", choices=("text", "json"), default="text")

    eval_p = sub.add_parser("eval", help="execute a scenario and print only query results")
    eval_p.add_argument("file", help="scenario file (.svq)")
    eval_p.add_argument("--seed", type=int, default=None)
    eval_p.add_argument("--tol", type=float, default=None)

    check_p = sub.add_parser("check", help="parse and check a scenario without running it")
    check_p.add_argument("file", help="scenario file (.svq)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        with open(args.file, encoding="utf-8") as handle:
            text = handle.read()
        scenario = parse_scenario(text)
        if args.command == "check":
            print(f"{args.file}: ok")
            return 0
        report = run_scenario(scenario, {"seed": args.seed, "tol": args.tol})
        if args.command == "eval":
            for entry in report.valuations:
                if entry["kind"] == "eval":
                    print(f"eval {entry['state']} in {entry['prop']} = {entry['truth']}")
                else:
                    print(f"super {entry['formula']} = {entry['truth']}")
            for entry in report.feasibility:
                verdict = "feasible" if entry["feasible"] else "infeasible"
                print(f"feasible {entry['first']} {entry['second']} = {verdict}")
            return 0
        sys.stdout.buffer.write(emit_report(report, args.format))
        sys.stdout.buffer.flush()
        return 1 if report.has_violations else 0
    except (OSError, SvqError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
