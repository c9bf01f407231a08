"""Command-line interface: ``ropelength analyze | constants | oracle-check``.

Exit codes: 0 success, 1 parse error, 2 geometric degeneracy, 3 expectation
violated.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from . import __version__
from . import bounds as B
from .geometry import GeometryError, PolyKnot
from .oracles import (OracleConfig, random_segment_quadruple, sampled_transversals,
                      shortest_path_avoiding_ball_oracle, two_ball_path_oracle)
from .quadrisecant import find_quadrisecants, transversals_of_four_segments, Degenerate
from .thickness import normalize_to_unit_thickness, thickness_and_ropelength

log = logging.getLogger("ropelength")

SCHEMA_VERSION = 1
EXIT_OK, EXIT_PARSE, EXIT_GEOMETRY, EXIT_EXPECTATION = 0, 1, 2, 3
DUPLICATE_CLOSING_TOL = 1e-12

_QUADBD_FORMS = {B.OrderType.SIMPLE: "π", B.OrderType.FLIPPED: "2π", B.OrderType.ALTERNATING: "3π"}


class KnotParseError(ValueError):
    pass


# --- knot files ------------------------------------------------------------

@dataclass
class KnotFile:
    path: str
    vertices: np.ndarray
    comments: list[str] = field(default_factory=list)

    def knot(self) -> PolyKnot:
        return PolyKnot(self.vertices)


def read_knot_file(data: bytes | str, path: str = "<input>") -> KnotFile:
    """Parse the vertex format: three reals per line, ``#`` comments, blanks."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise KnotParseError(f"{path}: not UTF-8 text ({exc})") from None
    rows, line_nos, comments = [], [], []
    for no, raw in enumerate(data.splitlines(), start=1):
        body, _, comment = raw.partition("#")
        if comment:
            comments.append(comment.strip())
        tokens = body.split()
        if not tokens:
            continue
        if len(tokens) != 3:
            raise KnotParseError(f"{path}:{no}: expected 3 coordinates, got {len(tokens)}")
        try:
            xyz = [float(tok) for tok in tokens]
        except ValueError:
            raise KnotParseError(f"{path}:{no}: malformed number in {body.strip()!r}") from None
        if not all(math.isfinite(c) for c in xyz):
            raise KnotParseError(f"{path}:{no}: non-finite coordinate")
        rows.append(xyz)
        line_nos.append(no)
    if len(rows) >= 2 and np.max(np.abs(np.subtract(rows[-1], rows[0]))) <= DUPLICATE_CLOSING_TOL:
        log.warning("%s:%d: final vertex repeats the first; dropping it", path, line_nos[-1])
        rows.pop()
        line_nos.pop()
    if len(rows) < 3:
        raise KnotParseError(f"{path}: need at least 3 vertices")
    for k in range(1, len(rows)):
        if rows[k] == rows[k - 1]:
            raise KnotParseError(f"{path}:{line_nos[k]}: duplicate of the previous vertex")
    return KnotFile(path, np.array(rows), comments)


def parse_knot_file(data: bytes | str, path: str = "<input>") -> PolyKnot:
    """Parse vertex text into a knot.

    Raises :class:`KnotParseError` for malformed text and
    :class:`GeometryError` for well-formed text describing a degenerate polygon.
    """
    return read_knot_file(data, path).knot()


def load_knot_argument(arg: str) -> PolyKnot:
    """A file path, or ``fixture:NAME`` for a bundled knot."""
    if arg.startswith("fixture:"):
        from .fixtures import fixture_text
        name = arg.split(":", 1)[1]
        try:
            return parse_knot_file(fixture_text(name), arg)
        except KeyError as exc:
            raise KnotParseError(str(exc.args[0])) from None
    try:
        data = Path(arg).read_bytes()
    except OSError as exc:
        raise KnotParseError(f"{arg}: {exc.strerror}") from None
    return parse_knot_file(data, arg)


# --- reports -------------------------------------------------------------------

def _clean(x):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to None."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


def _dumps(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False)


@dataclass
class AnalysisReport:
    schema_version: int
    tool_version: str
    knot: dict
    thickness: dict
    quadrisecants: list
    certificates: list
    arc_checks: list
    summary: dict
    diagnostics: dict
    seed: int
    tolerances: dict
    normalized_vertices: list | None = None

    def to_dict(self) -> dict:
        return _clean(asdict(self))

    def to_json(self) -> str:
        return _dumps(self.to_dict()) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "AnalysisReport":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValueError(f"unknown report fields: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return cls.from_dict(json.loads(text))

    def to_text(self) -> str:
        th, sm = self.thickness, self.summary
        out = [f"knot: {self.knot['n']} vertices, length {self.knot['length']:.6f}",
               f"min_rad {th['min_rad']:.6f}  dcsd {_fmt(th['dcsd'])}  thickness {th['thickness']:.6f}",
               f"ropelength {th['ropelength']:.6f}",
               f"quadrisecants: {len(self.quadrisecants)} "
               + "(" + ", ".join(f"{k} {v}" for k, v in sm["counts"].items()) + ")"]
        for k, (q, chk) in enumerate(zip(self.quadrisecants, self.arc_checks)):
            out.append(f"  [{k}] {q['order_type']:<11} edges {q['edges']}  r {q['r']:.6f}  "
                       f"s {q['s']:.6f}  t {q['t']:.6f}  tier1 {_pf(chk['tier1_passed'])}  "
                       f"tier2 {_pf(chk['tier2_passed'])}")
        if self.certificates:
            out.append("certificates:")
        for c in self.certificates:
            tag = "" if c["valid"] else "  (not a valid certificate: " + "; ".join(c["violations"]) + ")"
            out.append(f"  quadrisecant {c['quadrisecant']} {c['type']:<11} {c['kind']:<13} "
                       f"{c['closed_form']} = {_fmt(c['bound'])}{tag}")
        out.append(f"best unconditional bound: {_fmt(sm['best_unconditional_bound'])}")
        if "theorem_bound" in sm:
            out.append(f"best conditional bound (essential): {_fmt(sm['best_conditional_bound'])}")
            out.append(f"bound for any nontrivial knot (essential quadrisecant of unknown type): "
                       f"{sm['theorem_bound_form']} = {sm['theorem_bound']:.6f}")
        if sm.get("nontrivial_threshold") is not None:
            verdict = "consistent" if sm["ropelength_meets_threshold"] else "VIOLATED"
            out.append(f"nontrivial knot check: ropelength {th['ropelength']:.6f} vs "
                       f"{sm['nontrivial_threshold_form']} = {sm['nontrivial_threshold']:.6f}: {verdict}")
        d = self.diagnostics
        out.append(f"diagnostics: {d['degenerate_quadruples']} degenerate quadruples, "
                   f"{d['dedup_merges']} dedup merges; seed {self.seed}")
        return "\n".join(out) + "\n"


def _fmt(x) -> str:
    return "n/a" if x is None else f"{x:.6f}"


def _pf(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def analyze(knot: PolyKnot, tol: float = 1e-9, assume_essential: bool = False,
            expect_nontrivial: bool = False, seed: int = 0, normalize: bool = False,
            workers: int = 1) -> AnalysisReport:
    th = thickness_and_ropelength(knot)
    unit = normalize_to_unit_thickness(knot)
    scan = find_quadrisecants(unit, tol=tol, workers=workers)

    quads, certs, checks = [], [], []
    for k, q in enumerate(scan):
        quads.append({"points": [p.tolist() for p in q.points],
                      "positions": [{"edge": p.edge_index, "t": p.t, "s": p.s} for p in q.positions],
                      "edges": list(q.edges), "order_type": q.order_type.value,
                      "r": q.r, "s": q.s, "t": q.t})
        certs.append({"quadrisecant": k, "type": q.order_type.value, "kind": "unconditional",
                      "assumptions": [], "closed_form": _QUADBD_FORMS[q.order_type],
                      "bound": B.quadbd_bound(q.order_type),
                      "terms": [["reversed trisecant arcs", B.quadbd_bound(q.order_type)]],
                      "valid": True, "violations": []})
        if assume_essential:
            c = B.essential_bound(q.order_type, q.r, q.s, q.t, essential_assumed=True)
            certs.append({"quadrisecant": k, "type": q.order_type.value, "kind": "essential",
                          "assumptions": ["essential"],
                          "closed_form": " + ".join(label for label, _ in c.term_breakdown),
                          "bound": c.lower_bound, "terms": [[l, v] for l, v in c.term_breakdown],
                          "valid": c.valid, "violations": list(c.violations)})
        rep = B.verify_arc_inequalities(unit, q)
        checks.append({"quadrisecant": k, "tier1_passed": rep.tier1_passed,
                       "tier2_passed": rep.tier2_passed,
                       "inequalities": [{"tier": x.tier, "label": x.label, "lhs": x.lhs,
                                         "rhs": x.rhs, "margin": x.margin, "passed": x.passed}
                                        for x in rep.tier1 + rep.tier2]})

    uncond = [c["bound"] for c in certs if c["kind"] == "unconditional"]
    cond = [c["bound"] for c in certs if c["kind"] == "essential" and c["valid"]]
    summary = {"counts": {t.value: n for t, n in scan.counts().items()},
               "best_unconditional_bound": max(uncond) if uncond else None,
               "best_conditional_bound": max(cond) if cond else None}
    if assume_essential:
        # a nontrivial knot has an essential quadrisecant of some type
        summary["theorem_bound_form"] = "10π/3+2√3"
        summary["theorem_bound"] = B.FLIPPED_BOUND
    if expect_nontrivial:
        threshold = B.alternating_bound()
        summary["nontrivial_threshold_form"] = "2π+min(2f+g+r)"
        summary["nontrivial_threshold"] = threshold
        summary["ropelength_meets_threshold"] = th.ropelength >= threshold

    witness = th.witness_pair
    report = AnalysisReport(
        schema_version=SCHEMA_VERSION, tool_version=__version__,
        knot={"n": knot.n, "length": knot.total_length},
        thickness={"min_rad": th.min_rad, "dcsd": th.dcsd, "thickness": th.thickness,
                   "ropelength": th.ropelength,
                   "witnesses": {"min_rad_vertex": th.witness_vertex,
                                 "dcsd_pair": None if witness is None else
                                 [{"edge": p.edge_index, "t": p.t, "s": p.s} for p in witness]}},
        quadrisecants=quads, certificates=certs, arc_checks=checks, summary=summary,
        diagnostics={"degenerate_quadruples": scan.degenerate_quadruples,
                     "dedup_merges": scan.dedup_merges,
                     "candidate_quadruples": scan.candidate_quadruples,
                     "thickness_convention": "min(2 min_rad, dcsd), polygonal surrogate"},
        seed=seed, tolerances={"quadrisecant_tol": tol, "unit_thickness": B.UNIT_THICKNESS_TOL,
                               "arc_inequality": B.ARC_TOL},
        normalized_vertices=unit.vertices.tolist() if normalize else None)
    # store the JSON-normalized form so that a report equals its own round trip
    return AnalysisReport.from_dict(report.to_dict())


# --- constants -------------------------------------------------------------------

@dataclass(frozen=True)
class ConstantRow:
    label: str
    closed_form: str
    closed_value: float | None
    computed: float
    quoted: float | None = None
    quoted_relation: str = "="
    argmin: float | None = None
    argmin_range: tuple[float, float] | None = None
    quoted_upper: float | None = None

    @property
    def closed_ok(self) -> bool | None:
        if self.closed_value is None:
            return None
        return abs(self.computed - self.closed_value) <= CLOSED_FORM_TOL

    @property
    def quoted_ok(self) -> bool | None:
        if self.quoted is None:
            return None
        if self.quoted_relation == ">":
            return self.computed > self.quoted and (self.quoted_upper is None
                                                    or self.computed < self.quoted_upper)
        return abs(self.computed - self.quoted) <= QUOTED_TOL

    @property
    def argmin_ok(self) -> bool | None:
        if self.argmin_range is None:
            return None
        return self.argmin_range[0] < self.argmin < self.argmin_range[1]

    @property
    def passed(self) -> bool:
        return False not in (self.closed_ok, self.quoted_ok, self.argmin_ok)


CLOSED_FORM_TOL = 1e-9
QUOTED_TOL = 1e-3


def constants_table() -> list[ConstantRow]:
    """Every constant next to its independently recomputed value.

    ``computed`` comes from the minimizer or from evaluating the certificate
    at its minimizing lengths; ``closed_value`` is the closed form.
    """
    pi, r3 = math.pi, math.sqrt(3.0)
    recs = {rec.label: rec for rec in B.minimize_bound_terms()}
    r_star = recs["2f+g+r"].argmin
    rows = [
        ConstantRow("min f", "π/2", pi / 2, recs["f"].min_value, argmin=recs["f"].argmin),
        ConstantRow("min f+g", "7π/6+√3", B.MIN_F_PLUS_G, recs["f+g"].min_value,
                    quoted=5.39724, argmin=recs["f+g"].argmin),
        ConstantRow("min g+r", "π+2", B.MIN_G_PLUS_R, recs["g+r"].min_value,
                    argmin=recs["g+r"].argmin),
        ConstantRow("min 2f+g+r", "numerical", None, recs["2f+g+r"].min_value,
                    quoted=9.3774, quoted_upper=9.3775,
                    quoted_relation=">", argmin=r_star, argmin_range=(1.0029, 1.0032)),
        ConstantRow("quadrisecant bound simple", "π", pi, B.quadbd_bound(B.OrderType.SIMPLE)),
        ConstantRow("quadrisecant bound flipped", "2π", 2 * pi, B.quadbd_bound(B.OrderType.FLIPPED)),
        ConstantRow("quadrisecant bound alternating", "3π", 3 * pi,
                    B.quadbd_bound(B.OrderType.ALTERNATING)),
        ConstantRow("simple theorem", "10π/3+2√3+2", B.SIMPLE_BOUND,
                    B.essential_bound(B.OrderType.SIMPLE, 2, 2, 2).lower_bound, quoted=15.936,
                    quoted_relation=">"),
        ConstantRow("flipped theorem", "10π/3+2√3", B.FLIPPED_BOUND,
                    B.essential_bound(B.OrderType.FLIPPED, 2, 1, 2).lower_bound, quoted=13.936,
                    quoted_relation=">"),
        ConstantRow("alternating theorem", "2π+min(2f+g+r)", B.alternating_bound(list(recs.values())),
                    B.essential_bound(B.OrderType.ALTERNATING, 1.0, r_star, 1.0).lower_bound,
                    quoted=15.66, quoted_relation=">"),
        ConstantRow("link AAAB", "7π/3+2√3", 7 * pi / 3 + 2 * r3, B.link_component_bound("AAAB")),
        ConstantRow("link AABA", "8π/3+1+√3", 8 * pi / 3 + 1 + r3, B.link_component_bound("AABA")),
        ConstantRow("link ABBA", "2π+2", 2 * pi + 2, B.link_component_bound("ABBA")),
        ConstantRow("link ABCA", "2π+2", 2 * pi + 2, B.link_component_bound("ABCA")),
        ConstantRow("nonsplit 2-component link", "4π", 4 * pi, B.nonsplit_link_bound(2)),
    ]
    return rows


def format_constants(rows: list[ConstantRow]) -> str:
    out = [f"{'constant':<32}{'closed form':<18}{'closed value':>14}{'recomputed':>14}"
           f"{'argmin':>12}  {'checks':<40}result"]
    for row in rows:
        checks = []
        if row.closed_ok is not None:
            checks.append(f"closed<={CLOSED_FORM_TOL:g}")
        if row.quoted is not None:
            if row.quoted_upper is not None:
                checks.append(f"∈({row.quoted:g},{row.quoted_upper:g})")
            else:
                checks.append(f"{'> ' if row.quoted_relation == '>' else '≈'}{row.quoted:g}")
        if row.argmin_range is not None:
            checks.append(f"argmin∈({row.argmin_range[0]:g},{row.argmin_range[1]:g})")
        out.append(f"{row.label:<32}{row.closed_form:<18}"
                   f"{'' if row.closed_value is None else format(row.closed_value, '.6f'):>14}"
                   f"{row.computed:>14.6f}"
                   f"{'' if row.argmin is None else format(row.argmin, '.6f'):>12}  "
                   f"{', '.join(checks):<40}{_pf(row.passed)}")
    return "\n".join(out) + "\n"


def constants_json(rows: list[ConstantRow]) -> str:
    data = [dict(asdict(row), closed_ok=row.closed_ok, quoted_ok=row.quoted_ok,
                 argmin_ok=row.argmin_ok, passed=row.passed) for row in rows]
    return _dumps(_clean({"schema_version": SCHEMA_VERSION, "constants": data})) + "\n"


# --- oracle check -----------------------------------------------------------------

M_ORACLE_TOL = 2e-3
TRANSVERSAL_DIST_TOL = 1e-7


def oracle_check(grid: int = 8, seed: int = 0, quadruples: int = 200,
                 discretization: int = 4096, sampler_resolution: int = 256) -> dict:
    """Compare analytic code paths against the brute-force oracles.

    The ``m`` grid covers r, s in [1, 3] and theta in [0, pi] with ``grid``
    intervals per axis.  Output contains no timings, so equal flags give
    identical reports.
    """
    if grid < 1:
        raise ValueError("grid must be >= 1")
    cfg = OracleConfig(circle_discretization=discretization, sampler_resolution=sampler_resolution,
                       seed=seed)
    rs = np.linspace(1.0, 3.0, grid + 1)
    thetas = np.linspace(0.0, math.pi, grid + 1)
    worst, worst_at, below = 0.0, None, 0
    for r in rs:
        for s in rs:
            for th in thetas:
                diff = shortest_path_avoiding_ball_oracle(r, s, th, cfg) - B.m(r, s, th)
                below += diff < -1e-9
                if abs(diff) >= worst:
                    worst, worst_at = abs(diff), [float(r), float(s), float(th)]

    rng = np.random.default_rng(seed)
    spots = [(1.0, 1.0, 1.0), (2.0, 2.0, 2.0)] + [tuple(float(x) for x in rng.uniform(1, 3, 3))]
    long_arc = []
    for r, s, t in spots:
        oracle = two_ball_path_oracle(r, s, t, cfg)
        long_arc.append({"r": r, "s": s, "t": t, "oracle": oracle,
                         "bound": B.long_arc_bound(r, s, t),
                         "error": oracle - B.long_arc_bound(r, s, t)})

    missed = spurious = degenerate = solver_lines = sampler_lines = 0
    max_dist = 0.0
    for k in range(quadruples):
        segs, _ = random_segment_quadruple(rng, planted=k % 2 == 0)
        lines = transversals_of_four_segments(*segs)
        if isinstance(lines, Degenerate):
            degenerate += 1
            continue
        ref = sampled_transversals(*segs, cfg=cfg)
        solver_lines += len(lines)
        sampler_lines += len(ref)
        for line in lines:
            d = max(_segment_distance(line, sg) for sg in segs)
            max_dist = max(max_dist, d)
            spurious += d >= TRANSVERSAL_DIST_TOL
        for found in ref:
            missed += not any(np.linalg.norm(np.cross(found.direction, line.direction)) < 1e-6
                              and line.distance_to(found.point) < 1e-6 for line in lines)
    report = {
        "schema_version": SCHEMA_VERSION, "seed": seed,
        "config": {"grid": grid, "quadruples": quadruples, "circle_discretization": discretization,
                   "sampler_resolution": sampler_resolution},
        "m_grid": {"points": len(rs) ** 2 * len(thetas), "max_abs_error": worst,
                   "worst_at": worst_at, "oracle_below_m": int(below),
                   "passed": worst <= M_ORACLE_TOL and below == 0},
        "long_arc": {"spots": long_arc,
                     "passed": all(-1e-9 <= x["error"] <= M_ORACLE_TOL for x in long_arc)},
        "transversals": {"quadruples": quadruples, "degenerate": degenerate,
                         "solver_lines": solver_lines, "sampler_lines": sampler_lines,
                         "max_distance": max_dist, "spurious": spurious, "missed": missed,
                         "passed": spurious == 0 and missed == 0},
    }
    report["passed"] = all(report[k]["passed"] for k in ("m_grid", "long_arc", "transversals"))
    return _clean(report)


def _segment_distance(line, seg) -> float:
    from .geometry import closest_points_segments
    far = 1e3 * (1.0 + float(np.abs(seg.start).max() + np.abs(seg.end).max()
                             + np.abs(line.point).max()))
    return float(closest_points_segments(line.point - far * line.direction,
                                         line.point + far * line.direction,
                                         seg.start, seg.end)[0])


def format_oracle_check(rep: dict) -> str:
    m, la, tr = rep["m_grid"], rep["long_arc"], rep["transversals"]
    out = [f"oracle check (seed {rep['seed']}, grid {rep['config']['grid']}, "
           f"discretization {rep['config']['circle_discretization']})",
           f"m vs shortest path: {m['points']} points, max |m - oracle| = {m['max_abs_error']:.3e} "
           f"at {m['worst_at']}, oracle below m: {m['oracle_below_m']}  {_pf(m['passed'])}"]
    for x in la["spots"]:
        out.append(f"long arc r={x['r']:.4f} s={x['s']:.4f} t={x['t']:.4f}: oracle {x['oracle']:.9f} "
                   f"bound {x['bound']:.9f} diff {x['error']:.3e}")
    out.append(f"long arc bound vs two-ball oracle  {_pf(la['passed'])}")
    out.append(f"transversals: {tr['quadruples']} quadruples ({tr['degenerate']} degenerate), "
               f"solver {tr['solver_lines']} lines, sampler {tr['sampler_lines']} lines, "
               f"max distance {tr['max_distance']:.3e}, spurious {tr['spurious']}, "
               f"missed {tr['missed']}  {_pf(tr['passed'])}")
    out.append(f"overall {_pf(rep['passed'])}")
    return "\n".join(out) + "\n"


# --- entry point --------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ropelength", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="thickness, quadrisecants and bound certificates of a knot")
    a.add_argument("knot", help="vertex file, or fixture:NAME for a bundled knot")
    a.add_argument("--tol", type=float, default=1e-9, help="quadrisecant point tolerance")
    a.add_argument("--assume-essential", action="store_true",
                   help="treat every quadrisecant as essential and emit conditional certificates")
    a.add_argument("--expect-nontrivial", action="store_true",
                   help="exit 3 if the ropelength is below the bound for nontrivial knots")
    a.add_argument("--format", choices=("text", "json"), default="text")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--normalize", action="store_true",
                   help="include unit-thickness rescaled coordinates in the report")
    a.add_argument("--workers", type=int, default=1)

    c = sub.add_parser("constants", help="recompute every bound constant")
    c.add_argument("--format", choices=("text", "json"), default="text")

    o = sub.add_parser("oracle-check", help="cross-check analytic code against brute-force oracles")
    o.add_argument("--grid", type=int, default=8, help="intervals per axis of the m grid")
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--quadruples", type=int, default=200)
    o.add_argument("--discretization", type=int, default=4096)
    o.add_argument("--format", choices=("text", "json"), default="text")
    return p


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = _build_parser().parse_args(argv)
    if getattr(args, "seed", 0) < 0:
        print("error: --seed must be non-negative", file=sys.stderr)
        return EXIT_PARSE

    if args.command == "constants":
        rows = constants_table()
        sys.stdout.write(constants_json(rows) if args.format == "json" else format_constants(rows))
        return EXIT_OK if all(r.passed for r in rows) else EXIT_EXPECTATION

    if args.command == "oracle-check":
        rep = oracle_check(grid=args.grid, seed=args.seed, quadruples=args.quadruples,
                           discretization=args.discretization)
        sys.stdout.write(_dumps(rep) + "\n" if args.format == "json" else format_oracle_check(rep))
        return EXIT_OK if rep["passed"] else EXIT_EXPECTATION

    try:
        knot = load_knot_argument(args.knot)
        report = analyze(knot, tol=args.tol, assume_essential=args.assume_essential,
                         expect_nontrivial=args.expect_nontrivial, seed=args.seed,
                         normalize=args.normalize, workers=args.workers)
    except KnotParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (GeometryError, B.DomainError) as exc:
        print(f"geometry error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    sys.stdout.write(report.to_json() if args.format == "json" else report.to_text())
    if args.expect_nontrivial and not report.summary["ropelength_meets_threshold"]:
        print(f"expectation violated: ropelength {report.thickness['ropelength']:.6f} is below "
              f"{report.summary['nontrivial_threshold']:.6f}", file=sys.stderr)
        return EXIT_EXPECTATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
