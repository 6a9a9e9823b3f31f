"""Wall-clock per suite item, symbolic and oracle, sorted slowest first."""

import argparse

from qvfield import SuiteOptions, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--group", default="soq")
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--max-degree", type=int, default=None)
    ap.add_argument("--top", type=int, default=10)
    args = ap.parse_args()

    rep = run_suite(args.group, args.n, "both", SuiteOptions(max_degree=args.max_degree))
    rows = sorted(rep.checks, key=lambda c: -c.elapsed_ms)
    for c in rows[: args.top]:
        print(f"{c.elapsed_ms:10.1f} ms  {c.status:5}  {c.id}")
    print(f"total {sum(c.elapsed_ms for c in rep.checks) / 1000:.2f} s")


if __name__ == "__main__":
    main()
