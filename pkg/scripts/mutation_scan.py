"""Which suite items notice a sabotaged constant?

Flips the sign of the lambda term in the vector-field matrix, or adds 1 to the
R-matrix corner entry, and lists the items that fail in each backend.
"""

import argparse

from qvfield import SuiteOptions, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--group", default="suq")
    ap.add_argument("--n", type=int, default=2)
    args = ap.parse_args()

    for mutation in ("lambda_sign", "rhat"):
        rep = run_suite(args.group, args.n, "both", SuiteOptions(mutation=mutation))
        failed = [c.id for c in rep.checks if not c.passed]
        print(f"{mutation}: {len(failed)}/{len(rep.checks)} items fail")
        for i in failed:
            print(f"  {i}")


if __name__ == "__main__":
    main()
