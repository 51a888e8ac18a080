#!/usr/bin/env python3
"""Exact log-convexity evidence sweep.

For the polynomial (c = -1) and rational (c = +1) families, evaluates
Q = S*S'' - (S')^2 exactly at rational grid points for every index up to
--n-max and writes one JSON report per (family, n).  Margins are reported
as evidence; nothing here asserts the conjecture and the exit code is 0
whenever the sweep completes.
"""

import argparse
import json
import pathlib
import time
from fractions import Fraction

from sqsums.analysis import logconvexity_scan
from sqsums.core import Params


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=20)
    ap.add_argument("--count", type=int, default=1024, help="rational points per scan")
    ap.add_argument("--out", type=pathlib.Path, default=pathlib.Path("reports"))
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    start = time.monotonic()
    for c, tag in ((Fraction(-1), "bernstein"), (Fraction(1), "baskakov")):
        for n in range(1, args.n_max + 1):
            rep = logconvexity_scan(Params(n, c), count=args.count)
            doc = rep.to_json()
            path = args.out / f"logconvexity_{tag}_n{n:02d}.json"
            path.write_text(json.dumps(doc, indent=2) + "\n")
            neg = len(rep.violations)
            print(
                f"{tag:>9} n={n:2d}  min Q = {doc['min_margin']:>26} at x = {doc['argmin']}"
                f"  negatives: {neg}"
            )
    print(f"done in {time.monotonic() - start:.1f}s; reports in {args.out}/")


if __name__ == "__main__":
    main()
