"""How fast the shortest-path oracle converges to m as the circle is refined.

    python3 scripts/oracle_convergence.py [--grid 8] [--sizes 128 256 512 1024 2048 4096]
"""
from __future__ import annotations

import argparse
import math

import numpy as np

from ropelength import bounds as B
from ropelength.oracles import OracleConfig, shortest_path_avoiding_ball_oracle


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=8)
    ap.add_argument("--sizes", type=int, nargs="+", default=[128, 256, 512, 1024, 2048, 4096])
    args = ap.parse_args()

    rs = np.linspace(1, 3, args.grid + 1)
    thetas = np.linspace(0, math.pi, args.grid + 1)
    exact = np.array([B.m(r, s, t) for r in rs for s in rs for t in thetas])
    prev = None
    print(f"{'nodes':>6} {'max error':>12} {'mean error':>12} {'ratio(max)':>11}")
    for n in args.sizes:
        cfg = OracleConfig(circle_discretization=n)
        approx = np.array([shortest_path_avoiding_ball_oracle(r, s, t, cfg)
                           for r in rs for s in rs for t in thetas])
        err = approx - exact
        ratio = "" if prev is None else f"{prev / err.max():.2f}"
        print(f"{n:>6} {err.max():>12.3e} {err.mean():>12.3e} {ratio:>11}")
        prev = err.max()


if __name__ == "__main__":
    main()
