"""Brute-force reference computations used to cross-check the analytic code.

Nothing here calls into :mod:`ropelength.bounds` or the algebraic transversal
solver; the oracles are meant to stay independent of what they validate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage, optimize, sparse
from scipy.sparse.csgraph import dijkstra

from .geometry import Segment, closest_points_segments

_CLEAR_TOL = 1e-12
MAX_SEEDS = 16


@dataclass(frozen=True)
class OracleConfig:
    circle_discretization: int = 4096
    sampler_resolution: int = 512
    seed: int = 0

    def __post_init__(self):
        if self.circle_discretization < 16:
            raise ValueError("circle_discretization must be >= 16")
        if self.sampler_resolution < 8:
            raise ValueError("sampler_resolution must be >= 8")


# --- shortest paths around unit disks ---------------------------------------

def _segment_clear(p, q, centers) -> np.ndarray:
    """True where segment p-q stays outside every open unit disk (broadcasts)."""
    p, q = np.asarray(p, float), np.asarray(q, float)
    d = q - p
    dd = np.einsum("...i,...i", d, d)
    ok = np.ones(np.broadcast(p[..., 0], q[..., 0]).shape, dtype=bool)
    for c in centers:
        with np.errstate(invalid="ignore", divide="ignore"):
            t = np.where(dd > 0, np.einsum("...i,...i", c - p, d) / dd, 0.0)
        t = np.clip(t, 0.0, 1.0)
        closest = p + t[..., None] * d
        ok &= np.linalg.norm(closest - c, axis=-1) >= 1.0 - _CLEAR_TOL
    return ok


def _planar_shortest_path(start, goal, centers, n_nodes: int, chunk: int = 256) -> float:
    """Visibility-graph shortest path from ``start`` to ``goal`` avoiding open
    unit disks centred at ``centers``.  Circle nodes are joined to their
    neighbours by exact arcs, everything else by straight chords."""
    start, goal = np.asarray(start, float), np.asarray(goal, float)
    centers = [np.asarray(c, float) for c in centers]
    angles = 2 * np.pi * np.arange(n_nodes) / n_nodes
    ring = np.column_stack([np.cos(angles), np.sin(angles)])

    nodes = [start, goal]
    circle_ids = []
    for ci, c in enumerate(centers):
        pts = c + ring
        inside = np.zeros(n_nodes, dtype=bool)
        for cj, other in enumerate(centers):
            if cj != ci:
                inside |= np.linalg.norm(pts - other, axis=1) < 1.0 - _CLEAR_TOL
        ids = np.full(n_nodes, -1)
        ids[~inside] = np.arange(len(nodes), len(nodes) + int((~inside).sum()))
        nodes.extend(pts[~inside])
        circle_ids.append(ids)
    nodes = np.array(nodes)
    rows, cols, wts = [], [], []

    def add(i, j, w):
        rows.extend(np.atleast_1d(i).tolist())
        cols.extend(np.atleast_1d(j).tolist())
        wts.extend(np.atleast_1d(w).tolist())

    arc = 2 * np.pi / n_nodes
    for ci, ids in enumerate(circle_ids):
        nxt = np.roll(ids, -1)
        mid = centers[ci] + np.column_stack([np.cos(angles + arc / 2), np.sin(angles + arc / 2)])
        ok = (ids >= 0) & (nxt >= 0) & _segment_clear(mid, mid, [c for k, c in enumerate(centers) if k != ci])
        add(ids[ok], nxt[ok], np.full(ok.sum(), arc))

    for k, pt in enumerate((start, goal)):
        for ci, ids in enumerate(circle_ids):
            rel = pt - centers[ci]
            if abs(np.linalg.norm(rel) - 1.0) <= 1e-12:
                # endpoint on this circle: join it to the two bracketing nodes by arcs
                phi = math.atan2(rel[1], rel[0]) % (2 * np.pi)
                lo = int(math.floor(phi / arc)) % n_nodes
                hi = (lo + 1) % n_nodes
                for idx, w in ((lo, phi - lo * arc), (hi, (lo + 1) * arc - phi)):
                    if ids[idx] >= 0:
                        add(k, ids[idx], max(w, 0.0))
        others = np.arange(2, len(nodes))
        ok = _segment_clear(pt[None, :], nodes[others], centers)
        add(np.full(ok.sum(), k), others[ok], np.linalg.norm(nodes[others[ok]] - pt, axis=1))
    if _segment_clear(start, goal, centers):
        add(0, 1, float(np.linalg.norm(goal - start)))

    for ci in range(len(centers)):
        for cj in range(ci + 1, len(centers)):
            a_ids = circle_ids[ci][circle_ids[ci] >= 0]
            b_ids = circle_ids[cj][circle_ids[cj] >= 0]
            for lo in range(0, len(a_ids), chunk):
                ia = a_ids[lo:lo + chunk]
                p = nodes[ia][:, None, :]
                q = nodes[b_ids][None, :, :]
                ok = _segment_clear(p, q, centers)
                ii, jj = np.nonzero(ok)
                add(ia[ii], b_ids[jj], np.linalg.norm(nodes[ia[ii]] - nodes[b_ids[jj]], axis=1))

    graph = sparse.coo_matrix((wts, (rows, cols)), shape=(len(nodes), len(nodes))).tocsr()
    dist = dijkstra(graph, directed=False, indices=0)
    return float(dist[1])


def shortest_path_avoiding_ball_oracle(r: float, s: float, theta: float,
                                       cfg: OracleConfig = OracleConfig()) -> float:
    """Shortest path between points at distances r, s (angle theta) from the
    center of a unit ball, computed in their common plane."""
    a = np.array([r, 0.0])
    b = s * np.array([math.cos(theta), math.sin(theta)])
    return _planar_shortest_path(a, b, [np.zeros(2)], cfg.circle_discretization)


def two_ball_path_oracle(r: float, s_sep: float, t: float,
                         cfg: OracleConfig = OracleConfig()) -> float:
    """Shortest path from ``d`` to ``a`` avoiding unit balls around ``b`` and ``c``
    where a, b, c, d are collinear with |a-b| = r, |b-c| = s_sep, |c-d| = t."""
    if not (r >= 1 and t >= 1 and s_sep >= 1):
        raise ValueError("two_ball_path_oracle requires r, t, s_sep >= 1")
    a = np.array([-r, 0.0])
    d = np.array([s_sep + t, 0.0])
    centers = [np.zeros(2), np.array([s_sep, 0.0])]
    return _planar_shortest_path(d, a, centers, cfg.circle_discretization)


# --- sampled line transversals -----------------------------------------------

@dataclass(frozen=True)
class SampledLine:
    point: np.ndarray
    direction: np.ndarray
    params: tuple[float, float]
    max_distance: float


def _signed_line_distance(p, dvec, a, e):
    """Signed distance between the line (p, dvec) and the line (a, e) (broadcasts)."""
    n = np.cross(dvec, e)
    nn = np.linalg.norm(n, axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.einsum("...i,...i", a - p, n) / nn


def _triple(p, dvec, a, e):
    # sign agrees with _signed_line_distance; bilinear in the grid parameters
    return np.einsum("...i,...i", a - p, np.cross(dvec, e))


def sampled_transversals(s1: Segment, s2: Segment, s3: Segment, s4: Segment,
                         cfg: OracleConfig = OracleConfig(),
                         tol: float = 1e-9) -> list[SampledLine]:
    """Lines meeting four segments, found by sampling lines through s1 x s2.

    Every line meeting s1 and s2 passes through ``s1(u)`` and ``s2(v)`` for
    some (u, v) in the unit square.  Grid cells where the coplanarity
    functions for s3 and s4 both change sign are clustered, and each cluster
    is refined with a Gauss-Newton solve.
    """
    n = cfg.sampler_resolution
    g = np.linspace(0.0, 1.0, n + 1)
    P = s1.start + g[:, None] * s1.vector          # (n+1, 3) over u
    Q = s2.start + g[:, None] * s2.vector          # (n+1, 3) over v
    base = P[:, None, :]
    dvec = Q[None, :, :] - base
    hits = np.ones((n, n), dtype=bool)
    for seg in (s3, s4):
        h = _triple(base, dvec, seg.start, seg.vector)
        corners = np.stack([h[:-1, :-1], h[1:, :-1], h[:-1, 1:], h[1:, 1:]])
        scale = np.abs(h).max() * 1e-12
        hits &= (corners.min(axis=0) <= scale) & (corners.max(axis=0) >= -scale)
    labels, count = ndimage.label(hits, structure=np.ones((3, 3)))
    if count == 0:
        return []
    # nearly tangent zero curves can merge two roots into one long cluster, so
    # each cluster is refined from its centroid and from cells spread along it
    seeds = []
    for lab, centre in enumerate(ndimage.center_of_mass(hits, labels, range(1, count + 1)), start=1):
        cells = np.argwhere(labels == lab)
        seeds.append(centre)
        if len(cells) > 1:
            picks = np.unique(np.linspace(0, len(cells) - 1, min(len(cells), MAX_SEEDS)).round())
            seeds.extend(cells[picks.astype(int)])

    def residual(x):
        p = s1.point(x[0])
        dv = s2.point(x[1]) - p
        return np.array([_signed_line_distance(p, dv, s3.start, s3.vector),
                         _signed_line_distance(p, dv, s4.start, s4.vector)])

    found: list[SampledLine] = []
    for cu, cv in seeds:
        x0 = np.array([(cu + 0.5) / n, (cv + 0.5) / n])
        try:
            sol = optimize.least_squares(residual, x0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
        except ValueError:
            continue
        u, v = sol.x
        if not (-tol <= u <= 1 + tol and -tol <= v <= 1 + tol):
            continue
        u, v = min(max(u, 0.0), 1.0), min(max(v, 0.0), 1.0)
        p = s1.point(u)
        q = s2.point(v)
        if np.linalg.norm(q - p) == 0:
            continue
        direction = (q - p) / np.linalg.norm(q - p)
        far = 1e3 * (1.0 + max(np.abs(x).max() for x in (s1.start, s1.end, s2.start, s2.end,
                                                          s3.start, s3.end, s4.start, s4.end)))
        dists = [closest_points_segments(p - far * direction, p + far * direction,
                                         seg.start, seg.end)[0] for seg in (s1, s2, s3, s4)]
        worst = float(max(dists))
        if worst >= tol:
            continue
        if any(np.linalg.norm(np.cross(direction, f.direction)) < 1e-9
               and np.linalg.norm(np.cross(p - f.point, f.direction)) < 1e-9 for f in found):
            continue
        found.append(SampledLine(p, direction, (float(u), float(v)), worst))
    return found


def sampled_knot_transversals(vertices, cfg: OracleConfig = OracleConfig(),
                              coarse: int = 32) -> list[tuple[tuple[int, int, int, int], SampledLine]]:
    """Sampler-based search for lines meeting four pairwise non-adjacent edges.

    Edge quadruples are screened on a ``coarse`` grid of lines through the
    first two edges; survivors are handed to :func:`sampled_transversals`.
    Lines found from several quadruples are reported once, with the
    lexicographically first quadruple.
    """
    v = np.asarray(vertices, dtype=float)
    n = len(v)
    segs = [Segment(v[k], v[(k + 1) % n]) for k in range(n)]
    e = np.roll(v, -1, axis=0) - v

    def apart(a, b):
        return (a - b) % n not in (0, 1, n - 1)

    g = np.linspace(0.0, 1.0, coarse + 1)
    found: list[tuple[tuple[int, int, int, int], SampledLine]] = []
    diag = float(np.linalg.norm(v.max(axis=0) - v.min(axis=0)))
    for i in range(n):
        P = v[i] + g[:, None] * e[i]
        for j in range(i + 2, n):
            if not apart(i, j):
                continue
            ks = [k for k in range(j + 2, n) if apart(k, i)]
            if len(ks) < 2:
                continue
            Q = v[j] + g[:, None] * e[j]
            base = P[:, None, :]
            dvec = Q[None, :, :] - base
            hits = {}
            for k in ks:
                h = _triple(base, dvec, v[k], e[k])
                corners = np.stack([h[:-1, :-1], h[1:, :-1], h[:-1, 1:], h[1:, 1:]])
                slack = np.abs(h).max() * 1e-12
                hits[k] = (corners.min(axis=0) <= slack) & (corners.max(axis=0) >= -slack)
            for a, k in enumerate(ks):
                if not hits[k].any():
                    continue
                for l in ks[a + 1:]:
                    if not apart(k, l) or not (hits[k] & hits[l]).any():
                        continue
                    for line in sampled_transversals(segs[i], segs[j], segs[k], segs[l], cfg):
                        dup = any(np.linalg.norm(np.cross(line.direction, f.direction)) < 1e-6
                                  and np.linalg.norm(np.cross(line.point - f.point, f.direction)) < 1e-6 * diag
                                  for _, f in found)
                        if not dup:
                            found.append(((i, j, k, l), line))
    return found


def random_segment_quadruple(rng: np.random.Generator, planted: bool) -> tuple[list[Segment], np.ndarray | None]:
    """Four random segments; if ``planted``, all four cross a common random line.

    Returns the segments and, when planted, the unit direction and a point of
    the planted line stacked as a (2, 3) array.
    """
    if not planted:
        return [Segment(rng.normal(size=3), rng.normal(size=3)) for _ in range(4)], None
    p = rng.normal(size=3)
    d = rng.normal(size=3)
    d /= np.linalg.norm(d)
    segs = []
    for lam in np.sort(rng.uniform(-2.0, 2.0, size=4)):
        x = p + lam * d
        w = rng.normal(size=3)
        w -= np.dot(w, d) * d * rng.uniform(0.0, 0.9)  # keep the segment transverse to the line
        w /= np.linalg.norm(w)
        lo, hi = rng.uniform(0.1, 1.0, size=2)
        segs.append(Segment(x - lo * w, x + hi * w))
    return segs, np.stack([d, p])
