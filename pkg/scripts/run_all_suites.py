"""Run every shipped (group, N) in both modes and write one JSON report each."""

import argparse
from pathlib import Path

from qvfield import SuiteOptions, run_suite

SHIPPED = [("glq", 1), ("glq", 2), ("glq", 3), ("slq", 1), ("slq", 2), ("slq", 3), ("suq", 1), ("suq", 2), ("soq", 3)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("reports"))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--mode", default="both", choices=("symbolic", "numeric", "both"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    print(f"{'group':6} {'N':>2} {'pass':>6} {'items':>6} {'seconds':>8}")
    for group, n in SHIPPED:
        rep = run_suite(group, n, args.mode, SuiteOptions(seed=args.seed))
        secs = sum(c.elapsed_ms for c in rep.checks) / 1000
        ok = sum(c.passed for c in rep.checks)
        print(f"{group:6} {n:>2} {str(rep.passed):>6} {ok:>3}/{len(rep.checks):<2} {secs:8.2f}")
        (args.out / f"{group}{n}_{args.mode}.json").write_text(rep.to_json() + "\n")


if __name__ == "__main__":
    main()
