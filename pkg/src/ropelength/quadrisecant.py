"""Quadrisecants of polygonal knots.

A quadrisecant is found as a common transversal of four pairwise
non-adjacent edges.  For four lines in general position the transversals are
the lines ``X`` in the 2-dimensional null space of the four side-product
conditions that also lie on the Klein quadric ``D . M = 0``; that is a
quadratic with at most two real roots.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import optimize

from .bounds import OrderType
from .geometry import ArcPosition, GeometryError, PolyKnot, Segment

RANK_TOL = 1e-12
QUADRIC_TOL = 1e-12
DOUBLE_ROOT_TOL = 1e-12
PARAM_TOL = 1e-9
DIST_TOL = 1e-8
DEDUP_ANGLE = 1e-6
DEDUP_DIST = 1e-6


class TrisecantClass(str, Enum):
    DIRECT = "direct"
    REVERSED = "reversed"


@dataclass(frozen=True)
class TransversalLine:
    point: np.ndarray
    direction: np.ndarray
    segment_params: tuple[float, ...] = ()

    @property
    def moment(self) -> np.ndarray:
        return np.cross(self.point, self.direction)

    @property
    def plucker(self) -> np.ndarray:
        return np.concatenate([self.direction, self.moment])

    def at(self, lam: float) -> np.ndarray:
        return self.point + lam * self.direction

    def param_of(self, x) -> float:
        return float(np.dot(np.asarray(x, float) - self.point, self.direction))

    def distance_to(self, x) -> float:
        w = np.asarray(x, float) - self.point
        return float(np.linalg.norm(w - np.dot(w, self.direction) * self.direction))


@dataclass(frozen=True)
class Degenerate:
    """The four support lines admit a continuum of transversals (or nearly so)."""

    reason: str


def _cross(a, b) -> np.ndarray:
    # np.cross carries a lot of overhead for single 3-vectors
    return np.array([a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]])


def _line_segment_param(point, direction, seg_start, seg_vec):
    """Parameter on the segment of the point closest to the line, and the distance."""
    n = _cross(direction, seg_vec)
    nn = float(np.dot(n, n))
    if nn <= 1e-24 * float(np.dot(seg_vec, seg_vec)):
        return None, math.inf
    w = seg_start - point
    # seg_start + t seg_vec - (point + lam direction) is orthogonal to both
    t = float(np.dot(_cross(direction, w), n)) / -nn
    dist = abs(float(np.dot(w, n))) / math.sqrt(nn)
    return t, dist


def _polish(segs, point, direction):
    """Gauss-Newton polish of a line through s1(u), s2(v) meeting lines 3 and 4."""
    (a1, e1), (a2, e2), (a3, e3), (a4, e4) = segs
    u0, _ = _line_segment_param(point, direction, a1, e1)
    v0, _ = _line_segment_param(point, direction, a2, e2)
    if u0 is None or v0 is None:
        return point, direction

    def resid(x):
        p = a1 + x[0] * e1
        d = a2 + x[1] * e2 - p
        out = []
        for a, e in ((a3, e3), (a4, e4)):
            n = np.cross(d, e)
            out.append(np.dot(a - p, n) / (np.linalg.norm(n) + 1e-300))
        return np.array(out)

    sol = optimize.least_squares(resid, [u0, v0], method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
    p = a1 + sol.x[0] * e1
    d = a2 + sol.x[1] * e2 - p
    nd = np.linalg.norm(d)
    if nd == 0 or not np.all(np.isfinite(p)):
        return point, direction
    return p, d / nd


def transversals_of_four_segments(s1: Segment, s2: Segment, s3: Segment, s4: Segment,
                                  param_tol: float = PARAM_TOL,
                                  dist_tol: float = DIST_TOL) -> list[TransversalLine] | Degenerate:
    """All lines meeting the four closed segments, or :class:`Degenerate`."""
    segs = (s1, s2, s3, s4)
    pts = np.array([x for s in segs for x in (s.start, s.end)])
    centre = pts.mean(axis=0)
    scale = float(np.abs(pts - centre).max())
    if scale == 0:
        return Degenerate("coincident segments")
    local = [((s.start - centre) / scale, (s.end - s.start) / scale) for s in segs]

    starts = np.array([a for a, _ in local])
    dirs = np.array([e for _, e in local])
    dirs = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
    _, sing, vt = np.linalg.svd(np.hstack([np.cross(starts, dirs), dirs]))
    if sing[3] <= RANK_TOL * sing[0]:
        return Degenerate("support lines span fewer than 4 line conditions")
    x1, x2 = vt[4], vt[5]

    def omega(x, y):
        return 0.5 * (np.dot(x[:3], y[3:]) + np.dot(x[3:], y[:3]))

    q11, q12, q22 = omega(x1, x1), omega(x1, x2), omega(x2, x2)
    if max(abs(q11), abs(q12), abs(q22)) <= QUADRIC_TOL:
        return Degenerate("quadric vanishes on the null space")
    # q(phi) = A + B cos(2 phi) + C sin(2 phi) for X = cos(phi) x1 + sin(phi) x2
    A, B, C = 0.5 * (q11 + q22), 0.5 * (q11 - q22), q12
    R = math.hypot(B, C)
    disc = q12 * q12 - q11 * q22
    if disc < -DOUBLE_ROOT_TOL or R == 0.0:
        return []
    delta = math.atan2(C, B)
    spread = math.acos(min(1.0, max(-1.0, -A / R)))
    double = abs(disc) <= DOUBLE_ROOT_TOL
    phis = [0.5 * (delta + spread)] if double else [0.5 * (delta + spread), 0.5 * (delta - spread)]

    out: list[TransversalLine] = []
    for phi in phis:
        x = math.cos(phi) * x1 + math.sin(phi) * x2
        D, M = x[:3], x[3:]
        nD = np.linalg.norm(D)
        if nD <= 1e-12:
            continue  # line at infinity
        direction = D / nD
        point = _cross(D, M) / (nD * nD)
        if double:
            point, direction = _polish(local, point, direction)
        params = []
        for a, e in local:
            t, dist = _line_segment_param(point, direction, a, e)
            if t is None or dist > dist_tol or not (-param_tol <= t <= 1 + param_tol):
                break
            params.append(min(max(t, 0.0), 1.0))
        else:
            world_point = centre + scale * point
            # re-anchor at the point of the line closest to the origin
            world_point = world_point - np.dot(world_point, direction) * direction
            line = TransversalLine(world_point, direction, tuple(params))
            if not any(_same_line(line, o, 1e-9, 1e-9 * scale) for o in out):
                out.append(line)
    return out


def _same_line(l1: TransversalLine, l2: TransversalLine, angle_tol: float, dist_tol: float) -> bool:
    if np.linalg.norm(np.cross(l1.direction, l2.direction)) >= angle_tol:
        return False
    return l2.distance_to(l1.point) < dist_tol and l1.distance_to(l2.point) < dist_tol


# --- order types --------------------------------------------------------------

def _check_distinct(coords):
    if len(set(coords)) != len(coords):
        raise ValueError(f"coincident arclength coordinates: {coords}")


def cyclic_order(coords, total_length: float) -> str:
    """Labels ``a, b, c, ...`` (line order) read along the knot starting at ``a``."""
    coords = [float(c) % total_length for c in coords]
    _check_distinct(coords)
    labels = "abcdefgh"[: len(coords)]
    rel = [(c - coords[0]) % total_length for c in coords]
    return "".join(labels[k] for k in sorted(range(len(coords)), key=lambda k: rel[k]))


def dihedral_class(coords, total_length: float) -> str:
    """Lexicographically least representative of the knot order modulo D_n."""
    seq = cyclic_order(coords, total_length)
    rev = seq[0] + seq[1:][::-1]
    return min(seq, rev)


_ORDER_CLASSES = {"abcd": OrderType.SIMPLE, "abdc": OrderType.FLIPPED, "acbd": OrderType.ALTERNATING}


def classify_order(s_a: float, s_b: float, s_c: float, s_d: float, total_length: float) -> OrderType:
    return _ORDER_CLASSES[dihedral_class((s_a, s_b, s_c, s_d), total_length)]


def classify_trisecant(s_a: float, s_b: float, s_c: float, total_length: float) -> TrisecantClass:
    """Direct iff ``b`` lies on the oriented arc from ``a`` to ``c``."""
    coords = [float(x) % total_length for x in (s_a, s_b, s_c)]
    _check_distinct(coords)
    a, b, c = coords
    if (b - a) % total_length < (c - a) % total_length:
        return TrisecantClass.DIRECT
    return TrisecantClass.REVERSED


# --- quadrisecants on a knot -----------------------------------------------------

@dataclass(frozen=True)
class Quadrisecant:
    line: TransversalLine
    points: tuple[np.ndarray, ...]
    positions: tuple[ArcPosition, ...]
    line_params: tuple[float, ...]
    order_type: OrderType
    r: float
    s: float
    t: float

    @property
    def edges(self) -> tuple[int, ...]:
        return tuple(p.edge_index for p in self.positions)

    def collinearity_residual(self) -> float:
        return max(self.line.distance_to(p) for p in self.points)


def midsegment(q: Quadrisecant) -> Segment:
    return Segment(q.points[1], q.points[2])


@dataclass
class QuadrisecantScan:
    quadrisecants: list[Quadrisecant]
    degenerate_quadruples: int = 0
    dedup_merges: int = 0
    candidate_quadruples: int = 0
    dropped_collinear: int = 0

    def __iter__(self):
        return iter(self.quadrisecants)

    def __len__(self) -> int:
        return len(self.quadrisecants)

    def __getitem__(self, k):
        return self.quadrisecants[k]

    def counts(self) -> dict[OrderType, int]:
        out = {t: 0 for t in OrderType}
        for q in self.quadrisecants:
            out[q.order_type] += 1
        return out


def _nonadjacent(i: int, j: int, n: int) -> bool:
    return (i - j) % n not in (0, 1, n - 1)


def _candidate_quadruples_for(i: int, v: np.ndarray, e: np.ndarray, grid: int) -> list[tuple]:
    """Quadruples (i, j, k, l), i < j < k < l, that survive the cell test.

    Lines through ``v_i + u e_i`` and ``v_j + w e_j`` meet the support line of
    edge ``k`` where the bilinear function ``det[P_j - P_i, v_k - P_i, e_k]``
    vanishes.  A transversal of all four edges needs a (u, w) cell in which
    both functions for ``k`` and ``l`` can vanish; on a cell a bilinear
    function takes values between its corner values, so the test is exact.
    """
    n = len(v)
    g = np.linspace(0.0, 1.0, grid + 1)
    Pi = v[i] + g[:, None] * e[i]
    w_ki = np.cross(v[:, None, :] - Pi[None, :, :], e[:, None, :])     # (n, G+1, 3)
    weights = (np.uint64(1) << np.arange(grid * grid, dtype=np.uint64))
    out = []
    for j in range(i + 2, n):
        if not _nonadjacent(i, j, n):
            continue
        Pj = v[j] + g[:, None] * e[j]
        dv = Pj[None, :, :] - Pi[:, None, :]                            # (G+1 u, G+1 w, 3)
        ks = np.array([k for k in range(j + 2, n) if _nonadjacent(k, i, n)], dtype=int)
        if len(ks) < 2:
            continue
        h = np.einsum("abx,kax->kab", dv, w_ki[ks])                     # (K, G+1, G+1)
        corners = np.stack([h[:, :-1, :-1], h[:, 1:, :-1], h[:, :-1, 1:], h[:, 1:, 1:]])
        lo, hi = corners.min(axis=0), corners.max(axis=0)
        mask = (lo <= 1e-12) & (hi >= -1e-12)
        bits = (mask.reshape(len(ks), -1).astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)
        both = (bits[:, None] & bits[None, :]) != 0
        a_idx, b_idx = np.nonzero(np.triu(both, k=2))
        for a, b in zip(a_idx, b_idx):
            k, l = int(ks[a]), int(ks[b])
            if _nonadjacent(k, l, n):
                out.append((i, j, k, l))
    return out


def _snap(knot: PolyKnot, edge: int, t: float, tol: float) -> ArcPosition:
    length = knot.edge_lengths[edge]
    if (1.0 - t) * length <= tol:
        return knot.position(edge + 1, 0.0)
    if t * length <= tol:
        return knot.position(edge, 0.0)
    return knot.position(edge, t)


def _on_common_edge(knot: PolyKnot, p: ArcPosition, q: ArcPosition) -> bool:
    def closed_edges(x):
        return {x.edge_index, (x.edge_index - 1) % knot.n} if x.t == 0.0 else {x.edge_index}
    return bool(closed_edges(p) & closed_edges(q))


def _build(knot: PolyKnot, quad: tuple, line: TransversalLine, tol: float) -> Quadrisecant | None:
    positions = [_snap(knot, edge, t, tol) for edge, t in zip(quad, line.segment_params)]
    for a in range(4):
        for b in range(a + 1, 4):
            if _on_common_edge(knot, positions[a], positions[b]):
                return None
    points = [knot.point(p) for p in positions]
    lam = [line.param_of(p) for p in points]
    order = sorted(range(4), key=lambda k: lam[k])
    positions = [positions[k] for k in order]
    points = [points[k] for k in order]
    direction = line.direction
    if positions[0].s > positions[3].s:
        positions, points, direction = positions[::-1], points[::-1], -direction
    line = TransversalLine(line.point, direction, ())
    lam = [line.param_of(p) for p in points]
    if not all(b > a for a, b in zip(lam, lam[1:])):
        return None
    r, s, t = (float(np.linalg.norm(points[k + 1] - points[k])) for k in range(3))
    otype = classify_order(*(p.s for p in positions), knot.total_length)
    return Quadrisecant(line, tuple(points), tuple(positions), tuple(lam), otype, r, s, t)


def find_quadrisecants(knot: PolyKnot, tol: float = 1e-9, workers: int = 1,
                       grid: int = 8) -> QuadrisecantScan:
    """Every quadrisecant of ``knot`` through four pairwise non-adjacent edges.

    Output is sorted by smallest edge index, then by arclength of the first
    point, and does not depend on ``workers``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not 1 <= grid <= 8:
        raise ValueError("grid must be between 1 and 8 (cells are packed into 64-bit masks)")
    n, diag = knot.n, knot.bbox_diagonal()
    if diag == 0:
        raise GeometryError("knot has zero extent")
    centre = knot.vertices.mean(axis=0)
    v = (knot.vertices - centre) / diag
    e = np.roll(v, -1, axis=0) - v

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda i: _candidate_quadruples_for(i, v, e, grid), range(n)))
    else:
        parts = [_candidate_quadruples_for(i, v, e, grid) for i in range(n)]
    quads = [q for part in parts for q in part]

    def solve(quad):
        return transversals_of_four_segments(*(knot.segment(k) for k in quad))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(solve, quads))
    else:
        results = [solve(q) for q in quads]

    scan = QuadrisecantScan([], candidate_quadruples=len(quads))
    found: list[Quadrisecant] = []
    for quad, res in zip(quads, results):
        if isinstance(res, Degenerate):
            scan.degenerate_quadruples += 1
            continue
        for line in res:
            q = _build(knot, quad, line, tol)
            if q is None:
                scan.dropped_collinear += 1
                continue
            if any(_same_line(q.line, o.line, DEDUP_ANGLE, DEDUP_DIST * diag) for o in found):
                scan.dedup_merges += 1
                continue
            found.append(q)
    found.sort(key=lambda q: (min(q.edges), q.positions[0].s))
    scan.quadrisecants = found
    return scan
