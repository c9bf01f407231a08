"""Length bound functions and ropelength certificates for quadrisecants.

All lengths are in units where the knot has thickness 1.  The functions

* ``f(r) = sqrt(r^2 - 1) + arcsin(1/r)``: shortest way from a point at
  distance ``r`` from a unit ball's center around to the antipodal ray,
* ``g(r)``: minimal length of an essential arc whose endpoints are ``r`` apart,
* ``m(r, s, theta)``: shortest path around a unit ball,

combine into the per-order-type certificates of :func:`essential_bound`.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

PI = math.pi
SQRT3 = math.sqrt(3.0)


class OrderType(str, Enum):
    SIMPLE = "simple"
    FLIPPED = "flipped"
    ALTERNATING = "alternating"


class DomainError(ValueError):
    pass


class NoBoundKnown(ValueError):
    pass


def f(r: float) -> float:
    if not r >= 1.0:
        raise DomainError(f"f(r) requires r >= 1, got {r}")
    return math.sqrt(r * r - 1.0) + math.asin(1.0 / r)


def g(r: float) -> float:
    if not r >= 0.0:
        raise DomainError(f"g(r) requires r >= 0, got {r}")
    if r >= 2.0:
        return PI
    return 2.0 * PI - 2.0 * math.asin(r / 2.0)


def f_array(r):
    r = np.asarray(r, dtype=float)
    if np.any(r < 1.0):
        raise DomainError("f(r) requires r >= 1")
    return np.sqrt(r * r - 1.0) + np.arcsin(1.0 / r)


def g_array(r):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0.0):
        raise DomainError("g(r) requires r >= 0")
    return np.where(r >= 2.0, PI, 2.0 * PI - 2.0 * np.arcsin(np.minimum(r, 2.0) / 2.0))


def m_threshold(r: float, s: float) -> float:
    """Angle at which the shortest path around the ball starts to wrap."""
    return math.acos(1.0 / r) + math.acos(1.0 / s)


def m_chord(r: float, s: float, theta: float) -> float:
    return math.sqrt(max(r * r + s * s - 2.0 * r * s * math.cos(theta), 0.0))


def m_wrap(r: float, s: float, theta: float) -> float:
    return f(r) + f(s) + (theta - PI)


def m(r: float, s: float, theta: float) -> float:
    """Minimum length of a path joining points at distances ``r``, ``s`` from
    the center of a unit ball, at angle ``theta``, staying outside the ball."""
    if not (r >= 1.0 and s >= 1.0):
        raise DomainError(f"m requires r, s >= 1, got r={r}, s={s}")
    if not 0.0 <= theta <= PI:
        raise DomainError(f"m requires theta in [0, pi], got {theta}")
    if theta <= m_threshold(r, s):
        return m_chord(r, s, theta)
    return m_wrap(r, s, theta)


def essential_arc_min_length(d: float) -> float:
    return g(d)


def long_arc_bound(r: float, s: float, t: float) -> float:
    """Lower bound on the arc from ``d`` back to ``a`` avoiding both middle balls."""
    if not (r >= 1.0 and t >= 1.0 and s >= 0.0):
        raise DomainError(f"long_arc_bound requires r, t >= 1 and s >= 0, got {(r, s, t)}")
    return f(r) + s + f(t)


_QUADBD = {OrderType.SIMPLE: PI, OrderType.FLIPPED: 2 * PI, OrderType.ALTERNATING: 3 * PI}


def quadbd_bound(order_type: OrderType) -> float:
    """Unconditional ropelength bound from the reversed trisecants of a quadrisecant."""
    return _QUADBD[OrderType(order_type)]


# Closed forms of the per-type minima over r, s, t >= 1.
SIMPLE_BOUND = 10 * PI / 3 + 2 * SQRT3 + 2
FLIPPED_BOUND = 10 * PI / 3 + 2 * SQRT3
MIN_F_PLUS_G = 7 * PI / 6 + SQRT3
MIN_G_PLUS_R = PI + 2


@dataclass
class BoundCertificate:
    order_type: OrderType
    r: float
    s: float
    t: float
    essential_assumed: bool
    lower_bound: float
    term_breakdown: list[tuple[str, float]]
    violations: list[str] = field(default_factory=list)

    @property
    def preconditions_met(self) -> bool:
        return not self.violations

    @property
    def valid(self) -> bool:
        return self.essential_assumed and self.preconditions_met


def _safe_f(x: float) -> float:
    return f(x) if x >= 1.0 else math.nan


def essential_bound(order_type: OrderType, r: float, s: float, t: float,
                    essential_assumed: bool = True) -> BoundCertificate:
    """Ropelength certificate for an essential quadrisecant with segment lengths r, s, t.

    Violated ``>= 1`` preconditions are recorded instead of raised.  Terms
    that involve ``f`` below its domain evaluate to ``nan``.
    """
    order_type = OrderType(order_type)
    for name, val in (("r", r), ("s", s), ("t", t)):
        if not val >= 0.0:
            raise DomainError(f"{name} must be non-negative, got {val}")
    violations = [f"{name} = {val:.6g} < 1" for name, val in (("r", r), ("s", s), ("t", t))
                  if val < 1.0]
    fr, fs, ft = _safe_f(r), _safe_f(s), _safe_f(t)
    if order_type is OrderType.SIMPLE:
        terms = [("g(r)+f(r)", g(r) + fr), ("g(s)+s", g(s) + s), ("g(t)+f(t)", g(t) + ft)]
    elif order_type is OrderType.FLIPPED:
        terms = [("g(r)+f(r)", g(r) + fr), ("2f(s)", 2 * fs), ("g(t)+f(t)", g(t) + ft)]
    else:
        terms = [("2f(r)", 2 * fr), ("2f(s)+g(s)+s", 2 * fs + g(s) + s), ("2f(t)", 2 * ft)]
    if not essential_assumed:
        violations.append("essentialness not assumed")
    return BoundCertificate(order_type, r, s, t, essential_assumed,
                            sum(v for _, v in terms), terms, violations)


def essential_bound_grid(order_type: OrderType, values: np.ndarray) -> np.ndarray:
    """``essential_bound`` on the full grid ``values^3``, shape (n, n, n)."""
    v = np.asarray(values, dtype=float)
    fv, gv = f_array(v), g_array(v)
    if OrderType(order_type) is OrderType.SIMPLE:
        a, b, c = gv + fv, gv + v, gv + fv
    elif OrderType(order_type) is OrderType.FLIPPED:
        a, b, c = gv + fv, 2 * fv, gv + fv
    else:
        a, b, c = 2 * fv, 2 * fv + gv + v, 2 * fv
    return a[:, None, None] + b[None, :, None] + c[None, None, :]


# --- one-dimensional minimization ------------------------------------------

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class MinimizationRecord:
    label: str
    argmin: float
    min_value: float
    bracket: tuple[float, float]
    tolerance: float
    grid_argmin: float
    grid_min: float
    local_minima: tuple[float, ...]

    @property
    def unimodal_on_grid(self) -> bool:
        return len(self.local_minima) == 1


def golden_section(func: Callable[[float], float], lo: float, hi: float,
                   tol: float = 1e-8, max_iter: int = 200) -> tuple[float, float, float]:
    """Golden-section search on ``[lo, hi]``.

    Returns ``(argmin, min_value, final_bracket_width)``.  The bracket
    endpoints are evaluated too, so boundary minima are reported exactly, and
    the best point ever evaluated wins.
    """
    best = min(((func(x), x) for x in (lo, hi)))
    a, b = lo, hi
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = func(x1), func(x2)
    best = min(best, (f1, x1), (f2, x2))
    it = 0
    while b - a > tol and it < max_iter:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = func(x1)
            best = min(best, (f1, x1))
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = func(x2)
            best = min(best, (f2, x2))
        it += 1
    for x in (a, b, 0.5 * (a + b)):
        best = min(best, (func(x), x))
    return best[1], best[0], b - a


def grid_local_minima(ys: np.ndarray, rel_slack: float = 1e-13) -> list[int]:
    """Indices of local minima of a sampled function (endpoints included).

    Runs of equal values (plateaus) count once, at their first index.
    """
    slack = rel_slack * max(1.0, float(np.max(np.abs(ys))))
    n = len(ys)
    out = []
    k = 0
    while k < n:
        j = k
        while j + 1 < n and abs(ys[j + 1] - ys[k]) <= slack:
            j += 1
        left_ok = k == 0 or ys[k - 1] > ys[k] + slack
        right_ok = j == n - 1 or ys[j + 1] > ys[k] + slack
        if left_ok and right_ok:
            out.append(k)
        k = j + 1
    return out


def minimize_on_bracket(label: str, scalar: Callable[[float], float], vector,
                        lo: float = 1.0, hi: float = 4.0, tol: float = 1e-8,
                        grid_step: float = 1e-4) -> MinimizationRecord:
    """Grid scan for basins, then golden-section refinement inside each basin."""
    xs = np.linspace(lo, hi, int(round((hi - lo) / grid_step)) + 1)
    ys = vector(xs)
    minima = grid_local_minima(ys)
    k_best = int(np.argmin(ys))
    best = (math.inf, math.nan, math.nan)
    for k in minima:
        a, b = xs[max(k - 1, 0)], xs[min(k + 1, len(xs) - 1)]
        x, y, width = golden_section(scalar, float(a), float(b), tol)
        best = min(best, (y, x, width))
    y, x, width = best
    return MinimizationRecord(label, x, y, (lo, hi), width, float(xs[k_best]),
                              float(ys[k_best]), tuple(float(xs[k]) for k in minima))


BOUND_TERMS: dict[str, tuple[Callable[[float], float], Callable]] = {
    "f": (f, f_array),
    "f+g": (lambda r: f(r) + g(r), lambda r: f_array(r) + g_array(r)),
    "g+r": (lambda r: g(r) + r, lambda r: g_array(r) + r),
    "2f+g+r": (lambda r: 2 * f(r) + g(r) + r, lambda r: 2 * f_array(r) + g_array(r) + r),
}


def minimize_bound_terms(lo: float = 1.0, hi: float = 4.0, tol: float = 1e-8,
                         grid_step: float = 1e-4) -> list[MinimizationRecord]:
    """Minimize ``f``, ``f+g``, ``g+r`` and ``2f+g+r`` over ``[lo, hi]``."""
    return [minimize_on_bracket(label, scalar, vector, lo, hi, tol, grid_step)
            for label, (scalar, vector) in BOUND_TERMS.items()]


def alternating_bound(records: list[MinimizationRecord] | None = None) -> float:
    """``2 pi + min(2f + g + r)``: the bound for an essential alternating quadrisecant."""
    recs = {r.label: r for r in (records or minimize_bound_terms())}
    return 2 * PI + recs["2f+g+r"].min_value


# --- links ------------------------------------------------------------------

HANDLED_LINK_PATTERNS = {
    "AAAB": 7 * PI / 3 + 2 * SQRT3,
    "AABA": 8 * PI / 3 + 1 + SQRT3,
    "ABBA": 2 * PI + 2,
    "ABCA": 2 * PI + 2,
}


def _relabel(seq) -> str:
    names: dict = {}
    return "".join(names.setdefault(x, "ABCD"[len(names)]) for x in seq)


@dataclass(frozen=True)
class LinkPattern:
    """Component labels of the four quadrisecant points, in line order."""

    labels: tuple

    def __post_init__(self):
        labels = tuple(self.labels)
        if len(labels) != 4:
            raise ValueError("a quadrisecant pattern has exactly 4 labels")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def parse(cls, text: str) -> "LinkPattern":
        return cls(tuple(text.strip()))

    def canonical(self) -> str | None:
        """Handled pattern name this matches up to relabeling and reversal."""
        for seq in (self.labels, self.labels[::-1]):
            name = _relabel(seq)
            if name in HANDLED_LINK_PATTERNS:
                return name
        return None

    def bounded_component(self):
        """Original label of the component the bound applies to."""
        for seq in (self.labels, self.labels[::-1]):
            if _relabel(seq) in HANDLED_LINK_PATTERNS:
                return seq[0]
        return None


def link_component_bound(pattern: LinkPattern | str) -> float:
    if isinstance(pattern, str):
        pattern = LinkPattern.parse(pattern)
    name = pattern.canonical()
    if name is None:
        raise NoBoundKnown(f"no bound known for pattern {''.join(map(str, pattern.labels))}")
    return HANDLED_LINK_PATTERNS[name]


def nonsplit_link_bound(k: int) -> float:
    if int(k) != k or k < 1:
        raise DomainError(f"number of components must be a positive integer, got {k}")
    return 2 * PI * k


def all_link_patterns() -> list[str]:
    """Every 4-letter pattern up to relabeling (for exhaustive tests)."""
    return sorted({_relabel(p) for p in itertools.product("ABCD", repeat=4)})


# --- arc inequalities on a concrete knot ---------------------------------------

@dataclass(frozen=True)
class ArcInequality:
    tier: int
    label: str
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs

    @property
    def passed(self) -> bool:
        # nan margins (rhs undefined) fail
        return bool(self.margin >= -ARC_TOL)


ARC_TOL = 1e-9
UNIT_THICKNESS_TOL = 1e-6


@dataclass
class ArcReport:
    order_type: OrderType
    tier1: list[ArcInequality]
    tier2: list[ArcInequality]

    @property
    def tier1_passed(self) -> bool:
        return all(x.passed for x in self.tier1)

    @property
    def tier2_passed(self) -> bool:
        return all(x.passed for x in self.tier2)


def verify_arc_inequalities(knot, q) -> ArcReport:
    """Check the arc-length inequalities behind the bounds on a real quadrisecant.

    ``knot`` must have thickness 1.  Tier 1 holds for every quadrisecant of
    that order type.  Tier 2 additionally assumes the quadrisecant is
    essential.  Arcs ``len(xy)`` are measured along the orientation of the
    knot in which ``b`` lies on the arc from ``a`` to ``d``.
    """
    from .geometry import arc_length
    from .thickness import thickness_and_ropelength

    tau = thickness_and_ropelength(knot).thickness
    if abs(tau - 1.0) > UNIT_THICKNESS_TOL:
        raise DomainError(f"knot must have unit thickness, got {tau:.9g}")
    a, b, c, d = q.positions
    forward = arc_length(knot, a, b) < arc_length(knot, a, d)
    pos = dict(zip("abcd", q.positions))

    def arc(xy: str) -> float:
        x, y = pos[xy[0]], pos[xy[1]]
        return arc_length(knot, x, y) if forward else arc_length(knot, y, x)

    r, s, t = q.r, q.s, q.t
    otype = OrderType(q.order_type)
    tier1_arcs = {OrderType.SIMPLE: ["da"], OrderType.FLIPPED: ["ca", "bd"],
                  OrderType.ALTERNATING: ["ac", "bd", "da"]}[otype]
    tier1 = [ArcInequality(1, f"len({xy}) >= pi", arc(xy), PI) for xy in tier1_arcs]

    fr, fs, ft = _safe_f(r), _safe_f(s), _safe_f(t)
    if otype is OrderType.SIMPLE:
        rows = [("ab", "g(r)", g(r)), ("bc", "g(s)", g(s)), ("cd", "g(t)", g(t)),
                ("da", "f(r)+s+f(t)", fr + s + ft)]
    elif otype is OrderType.FLIPPED:
        rows = [("ab", "g(r)", g(r)), ("dc", "g(t)", g(t)),
                ("bd", "f(s)+f(t)", fs + ft), ("ca", "f(r)+f(s)", fr + fs)]
    else:
        rows = [("ac", "f(r)+f(s)", fr + fs), ("bd", "f(s)+f(t)", fs + ft),
                ("cb", "g(s)", g(s)), ("da", "f(r)+s+f(t)", fr + s + ft)]
    tier2 = [ArcInequality(2, f"{name} >= 1", val, 1.0) for name, val in (("r", r), ("s", s), ("t", t))]
    tier2 += [ArcInequality(2, f"len({xy}) >= {label}", arc(xy), rhs) for xy, label, rhs in rows]
    cert = essential_bound(otype, r, s, t)
    tier2.append(ArcInequality(2, "length >= essential bound", knot.total_length, cert.lower_bound))
    return ArcReport(otype, tier1, tier2)
