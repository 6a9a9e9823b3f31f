"""Command line entry point: ``qvfield verify ...``."""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .harness import GROUPS, MODES, SuiteOptions, UnsupportedGroup, checks_for, run_suite
from .qring import PoleAtPoint
from .rtensor import UnsupportedDimension

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qvfield", description="Exact verification of quantum vector-field identities.")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run an identity suite")
    v.add_argument("--group", required=True, choices=sorted(GROUPS))
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--mode", choices=MODES, default="symbolic")
    v.add_argument("--q", type=_rational, action="append", default=[], help="oracle point (repeatable); default: seeded sample")
    v.add_argument("--max-degree", type=int, default=None)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--report", choices=("text", "json"), default="text")
    v.add_argument("--out", type=Path, default=None)
    v.add_argument("--sigma", type=int, choices=(1, -1), default=1)
    v.add_argument("--list-checks", action="store_true")
    v.add_argument("--allow-large", action="store_true", help="enable soq N=4 (slow)")
    v.add_argument("--only", action="append", default=[], help="restrict to a check id or prefix such as G7")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_PASS

    if args.list_checks:
        for c in checks_for(args.group):
            print(f"{c.id:32} {c.anchor}")
        return EXIT_PASS

    opts = SuiteOptions(
        q_points=list(args.q),
        max_degree=args.max_degree,
        seed=args.seed,
        sigma=args.sigma,
        allow_large=args.allow_large,
        only=tuple(args.only),
    )
    try:
        report = run_suite(args.group, args.n, args.mode, opts)
    except (UnsupportedGroup, UnsupportedDimension, PoleAtPoint, ValueError) as exc:
        print(f"qvfield: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    text = report.to_json() if args.report == "json" else report.to_text()
    if args.out is not None:
        args.out.write_text(text + "\n")
    else:
        print(text)
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
