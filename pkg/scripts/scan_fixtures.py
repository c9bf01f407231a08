"""Thickness and quadrisecant census of the bundled knots.

    python3 scripts/scan_fixtures.py [--sampler]

With ``--sampler`` every scan is cross-checked against the sampling oracle
(slow: about 15 s for the trefoil).
"""
from __future__ import annotations

import argparse

from ropelength import FIXTURE_NAMES, load_fixture
from ropelength.bounds import verify_arc_inequalities
from ropelength.oracles import OracleConfig, sampled_knot_transversals
from ropelength.quadrisecant import find_quadrisecants
from ropelength.thickness import normalize_to_unit_thickness, thickness_and_ropelength


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sampler", action="store_true")
    args = ap.parse_args()

    print(f"{'knot':<16}{'n':>4}{'ropelength':>12}{'simple':>8}{'flipped':>8}{'altern.':>8}"
          f"{'tier1':>7}{'tier2':>7}{'degen.':>8}" + ("  sampler" if args.sampler else ""))
    for name in FIXTURE_NAMES:
        knot = load_fixture(name)
        rl = thickness_and_ropelength(knot).ropelength
        unit = normalize_to_unit_thickness(knot)
        scan = find_quadrisecants(unit) if knot.n >= 8 else None
        if scan is None:
            print(f"{name:<16}{knot.n:>4}{rl:>12.6f}   (too few edges for a quadrisecant)")
            continue
        reps = [verify_arc_inequalities(unit, q) for q in scan]
        c = scan.counts()
        line = (f"{name:<16}{knot.n:>4}{rl:>12.6f}{c['simple']:>8}{c['flipped']:>8}"
                f"{c['alternating']:>8}{sum(r.tier1_passed for r in reps):>7}"
                f"{sum(r.tier2_passed for r in reps):>7}{scan.degenerate_quadruples:>8}")
        if args.sampler:
            ref = sampled_knot_transversals(unit.vertices, OracleConfig(sampler_resolution=64))
            line += f"  {len(ref)} lines ({'agrees' if len(ref) == len(scan) else 'DIFFERS'})"
        print(line)


if __name__ == "__main__":
    main()
