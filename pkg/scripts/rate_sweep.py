#!/usr/bin/env python3
"""Sweep the rate factor over the sample-size lattice for the three
polynomial-decay regimes and print the fitted growth exponents.

Usage: python scripts/rate_sweep.py [--n-max 10000000] [--r 4]
"""
import argparse

import numpy as np

from mixbound import grid, mixing, rates


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n-max", type=int, default=10**7)
    ap.add_argument("--n-min", type=int, default=10**3)
    ap.add_argument("--r", type=float, default=4.0)
    args = ap.parse_args()

    members = [n for n in grid.lattice_members(3, args.n_max) if n >= args.n_min]
    print(f"lattice points: {len(members)} in [{members[0]}, {members[-1]}]")
    crit = args.r / (args.r - 2.0)
    for m in (2 * crit, crit, 0.25 * crit):
        profile = mixing.polynomial_profile(m)
        regime, predicted = rates.regime_classify(m, args.r)
        factors = [rates.rate_factor(n, args.r, profile) for n in members]
        slope = rates.loglog_slope(members, factors)
        eff = members[-1] / factors[-1]
        target = "(log n)^{%.3g}" % predicted if regime == "critical" \
            else f"n^{predicted:+.4f}"
        print(f"m={m:6.3f} regime={regime:8s} fitted slope={slope:+.4f} "
              f"predicted growth {target}  effective n at top={eff:,.0f}")
        if regime == "critical":
            tail = [n for n in members if n >= args.n_max / 100]
            ratio = [rates.rate_factor(n, args.r, profile) / np.log(n) ** (1 / m)
                     for n in tail]
            print(f"         critical ratio band: [{min(ratio):.3f}, {max(ratio):.3f}]")


if __name__ == "__main__":
    main()
