"""Recompute the bound constants and confirm them with a brute-force grid.

    python3 scripts/reproduce_constants.py [--step 0.01]
"""
from __future__ import annotations

import argparse

import numpy as np

from ropelength import bounds as B
from ropelength.cli import constants_table, format_constants


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--step", type=float, default=0.01, help="grid step over [1, 4]^3")
    args = ap.parse_args()

    print(format_constants(constants_table()))
    grid = np.arange(1.0, 4.0 + args.step / 2, args.step)
    closed = {B.OrderType.SIMPLE: B.SIMPLE_BOUND, B.OrderType.FLIPPED: B.FLIPPED_BOUND,
              B.OrderType.ALTERNATING: B.alternating_bound()}
    print(f"grid search over [1,4]^3, step {args.step} ({len(grid) ** 3} points per type)")
    for otype in B.OrderType:
        vals = B.essential_bound_grid(otype, grid)
        i, j, k = np.unravel_index(np.argmin(vals), vals.shape)
        print(f"  {otype.value:<12} grid min {vals.min():.6f} at r={grid[i]:.2f} s={grid[j]:.2f} "
              f"t={grid[k]:.2f}; closed form {closed[otype]:.6f}; "
              f"gap {vals.min() - closed[otype]:+.2e}")

    rec = {r.label: r for r in B.minimize_bound_terms()}["2f+g+r"]
    print(f"2f+g+r basins on the scan grid: {', '.join(f'{x:.4f}' for x in rec.local_minima)}")


if __name__ == "__main__":
    main()
