#!/usr/bin/env python3
"""Minimum bound margins per family and index over the standard grids.

Prints, for every family and admissible index, the smallest gap between
the proven upper bounds and the squared-basis sum.  Zero rows are the
equality anchors (the index-1 central-binomial envelope for the Baskakov
family and its index-0 counterpart for Meyer-Konig-Zeller).
"""

import argparse

from sqsums.bounds import bound_values, standard_grid
from sqsums.core import FamilyId


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=30)
    ap.add_argument("--count", type=int, default=256, help="Chebyshev points per grid")
    args = ap.parse_args()

    for name, n_lo in (
        ("bernstein", 1),
        ("bbh", 1),
        ("baskakov", 1),
        ("mkz", 0),
        ("szasz", 1),
    ):
        family = FamilyId(name)
        grid = standard_grid(family, count=args.count)
        for n in range(n_lo, args.n_max + 1):
            worst = min((bound_values(family, n, x) for x in grid), key=lambda r: r.min_margin)
            print(
                f"{name:>9} n={n:2d}  min margin {worst.min_margin:+.3e} "
                f"at x={worst.x:.6g} (s={worst.s_value:.6g})"
            )


if __name__ == "__main__":
    main()
