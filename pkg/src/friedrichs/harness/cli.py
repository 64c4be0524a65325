"""Command line entry point.

    friedrichs pole|survival|emission|correlation|selftest [options]

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 selftest failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..errors import DomainError, FriedrichsError, ParameterError
from .config import load_config
from .output import format_metrics, write_pole, write_report
from .scenarios import report_pole, run_correlation, run_emission, run_survival
from .selftest import run_selftests

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_SELFTEST = 0, 1, 2, 3

_SCENARIOS = {"survival": run_survival, "emission": run_emission, "correlation": run_correlation}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--preset", default="paper", help="parameter preset (default: paper)")
    common.add_argument("--config", help="INI file overriding the preset")
    common.add_argument("--out", help="output directory (default: <out_dir>/<verb>)")
    common.add_argument("--tolerance", type=float, help="general numerical tolerance")
    common.add_argument("--dt-policy", help="CN4 step: 'auto' or 'fixed:<dt>'")

    parser = _Parser(prog="friedrichs", description="Unstable-state decay in the Friedrichs model.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    sub.add_parser("pole", parents=[common], help="resonance pole and residue")
    sub.add_parser("survival", parents=[common], help="survival amplitude, total vs restricted")
    sub.add_parser("emission", parents=[common], help="emitted field at fixed t")
    sub.add_parser("correlation", parents=[common], help="field correlation at fixed t and x2")
    sub.add_parser("selftest", parents=[common], help="Hardy and restriction invariant suites")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, preset=args.preset,
                          tolerance=args.tolerance, dt_policy=args.dt_policy)
    except (ParameterError, KeyError) as exc:
        print(f"friedrichs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = Path(args.out) if args.out else Path(cfg.out_dir) / args.verb

    try:
        if args.verb == "pole":
            report = report_pole(cfg)
            write_pole(report, out)
            sys.stdout.write(format_metrics(report.metrics))
        elif args.verb == "selftest":
            summary = run_selftests(cfg)
            out.mkdir(parents=True, exist_ok=True)
            (out / "selftest.txt").write_text(summary.table() + "\n")
            print(summary.table())
            if not summary.passed:
                return EXIT_SELFTEST
        else:
            report = _SCENARIOS[args.verb](cfg)
            write_report(report, out)
            sys.stdout.write(format_metrics(report.metrics))
    except (DomainError, ParameterError) as exc:
        print(f"friedrichs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FriedrichsError, ArithmeticError, ValueError) as exc:
        print(f"friedrichs: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    print(f"wrote {out}", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
