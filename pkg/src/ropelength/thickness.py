"""Polygonal thickness and ropelength.

Thickness uses the diameter convention and the standard discrete surrogate

    thickness = min(2 * min_rad, dcsd)

where ``min_rad`` is the smallest vertex radius ``min(|e_in|, |e_out|) /
(2 tan(theta / 2))`` and ``dcsd`` is the doubly-critical self distance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import ArcPosition, GeometryError, PolyKnot, closest_points_segments

# slack on edge parameters and on the normal-cone sign test
_PARAM_TOL = 1e-12
_CONE_TOL = 1e-12


@dataclass(frozen=True)
class ThicknessReport:
    min_rad: float
    dcsd: float
    thickness: float
    length: float
    ropelength: float
    witness_vertex: int
    witness_pair: tuple[ArcPosition, ArcPosition] | None


def vertex_radii(knot: PolyKnot) -> np.ndarray:
    """Discrete radius at every vertex (``inf`` where the polygon is straight)."""
    e = knot.edges
    lengths = knot.edge_lengths
    e_in, l_in = np.roll(e, 1, axis=0), np.roll(lengths, 1)
    # tan(theta/2) = |a x b| / (|a||b| + a.b) for the turning angle theta
    sin_part = np.linalg.norm(np.cross(e_in, e), axis=1)
    cos_part = l_in * lengths + np.einsum("ij,ij->i", e_in, e)
    with np.errstate(divide="ignore"):
        radii = np.minimum(l_in, lengths) * cos_part / (2.0 * sin_part)
    radii[sin_part == 0.0] = math.inf
    return radii


def min_rad(knot: PolyKnot) -> tuple[float, int]:
    radii = vertex_radii(knot)
    i = int(np.argmin(radii))
    return float(radii[i]), i


def _vertex_critical(knot: PolyKnot, k: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Closed normal-cone test: vertex ``k`` is a critical point of |. - q|.

    The one-sided derivatives of the distance along the incoming and outgoing
    edges must not share a strict sign.
    """
    tangents = knot.edges / knot.edge_lengths[:, None]
    w = knot.vertices[k] - q
    w = w / np.linalg.norm(w, axis=-1, keepdims=True)
    t_in = tangents[(k - 1) % knot.n]
    t_out = tangents[k]
    return np.einsum("...i,...i", w, t_in) * np.einsum("...i,...i", w, t_out) <= _CONE_TOL


def _open_unit(x: np.ndarray) -> np.ndarray:
    # endpoint hits are vertices and are handled by the vertex candidates
    return (x > _PARAM_TOL) & (x < 1.0 - _PARAM_TOL)


def _nonadjacent_edge_pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    i, j = np.triu_indices(n, k=2)
    keep = ~((i == 0) & (j == n - 1))
    return i[keep], j[keep]


def check_embedded(knot: PolyKnot, rel_tol: float = 1e-12) -> float:
    """Minimum distance between non-adjacent edges; raises if they touch."""
    i, j = _nonadjacent_edge_pairs(knot.n)
    if len(i) == 0:
        return math.inf
    v = knot.vertices
    dist, _, _ = closest_points_segments(v[i], v[(i + 1) % knot.n], v[j], v[(j + 1) % knot.n])
    k = int(np.argmin(dist))
    if dist[k] <= rel_tol * knot.bbox_diagonal():
        raise GeometryError(f"curve not embedded: edges {i[k]} and {j[k]} intersect")
    return float(dist[k])


def dcsd(knot: PolyKnot) -> tuple[float, tuple[ArcPosition, ArcPosition] | None]:
    """Doubly-critical self distance and a witness pair of positions.

    Candidates are (edge interior, edge interior) for non-adjacent edges,
    (vertex, edge) with the vertex not on the edge, and (vertex, vertex) not
    joined by an edge.  Returns ``(inf, None)`` if no critical pair exists.
    """
    check_embedded(knot)
    n, v = knot.n, knot.vertices
    e = knot.edges
    cands = []  # rows: dist, edge_p, t_p, edge_q, t_q

    # interior / interior
    i, j = _nonadjacent_edge_pairs(n)
    if len(i):
        a, b, c = (np.einsum("ij,ij->i", e[i], e[i]), np.einsum("ij,ij->i", e[i], e[j]),
                   np.einsum("ij,ij->i", e[j], e[j]))
        w0 = v[i] - v[j]
        d, f = np.einsum("ij,ij->i", e[i], w0), np.einsum("ij,ij->i", e[j], w0)
        denom = a * c - b * b
        parallel = denom <= 1e-14 * a * c
        with np.errstate(divide="ignore", invalid="ignore"):
            u = (b * f - c * d) / denom
            w = (a * f - b * d) / denom
        ok = ~parallel & _open_unit(u) & _open_unit(w)
        u, w = u[ok], w[ok]
        p = v[i[ok]] + u[:, None] * e[i[ok]]
        q = v[j[ok]] + w[:, None] * e[j[ok]]
        cands.append(np.column_stack([np.linalg.norm(p - q, axis=1), i[ok], u, j[ok], w]))
        # parallel edges: one representative at the middle of the overlap
        ip, jp = i[parallel], j[parallel]
        if len(ip):
            ai = a[parallel]
            lo = np.einsum("ij,ij->i", v[jp] - v[ip], e[ip]) / ai
            hi = np.einsum("ij,ij->i", v[(jp + 1) % n] - v[ip], e[ip]) / ai
            lo, hi = np.maximum(np.minimum(lo, hi), 0.0), np.minimum(np.maximum(lo, hi), 1.0)
            ok = hi - lo > _PARAM_TOL
            ip, jp, u = ip[ok], jp[ok], 0.5 * (lo[ok] + hi[ok])
            p = v[ip] + u[:, None] * e[ip]
            w = np.einsum("ij,ij->i", p - v[jp], e[jp]) / np.einsum("ij,ij->i", e[jp], e[jp])
            q = v[jp] + w[:, None] * e[jp]
            cands.append(np.column_stack([np.linalg.norm(p - q, axis=1), ip, u, jp, w]))

    # vertex / edge interior
    kk, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    kk, jj = kk.ravel(), jj.ravel()
    keep = (kk != jj) & (kk != (jj + 1) % n)
    kk, jj = kk[keep], jj[keep]
    if len(kk):
        c = np.einsum("ij,ij->i", e[jj], e[jj])
        w = np.einsum("ij,ij->i", v[kk] - v[jj], e[jj]) / c
        ok = _open_unit(w)
        kk, jj, w = kk[ok], jj[ok], w[ok]
        q = v[jj] + w[:, None] * e[jj]
        dist = np.linalg.norm(v[kk] - q, axis=1)
        ok = (dist > 0) & _vertex_critical(knot, kk, q)
        cands.append(np.column_stack([dist[ok], kk[ok], np.zeros(ok.sum()), jj[ok], w[ok]]))

    # vertex / vertex
    k, l = _nonadjacent_edge_pairs(n)
    if len(k):
        ok = _vertex_critical(knot, k, v[l]) & _vertex_critical(knot, l, v[k])
        k, l = k[ok], l[ok]
        cands.append(np.column_stack([np.linalg.norm(v[k] - v[l], axis=1), k,
                                      np.zeros(len(k)), l, np.zeros(len(k))]))

    rows = np.concatenate(cands) if cands else np.empty((0, 5))
    if len(rows) == 0:
        return math.inf, None
    best = rows[:, 0].min()
    tied = rows[rows[:, 0] <= best * (1 + 1e-12)]
    pairs = []
    for dist_, ep, tp, eq_, tq in tied:
        a_pos, b_pos = knot.position(int(ep), tp), knot.position(int(eq_), tq)
        if b_pos.s < a_pos.s:
            a_pos, b_pos = b_pos, a_pos
        pairs.append((a_pos.s, b_pos.s, a_pos, b_pos))
    pairs.sort(key=lambda x: (x[0], x[1]))
    return float(best), (pairs[0][2], pairs[0][3])


def thickness_and_ropelength(knot: PolyKnot) -> ThicknessReport:
    mr, vertex = min_rad(knot)
    dc, pair = dcsd(knot)
    tau = min(2.0 * mr, dc)
    if not tau > 0 or math.isinf(tau):
        raise GeometryError(f"thickness is not positive and finite: {tau}")
    return ThicknessReport(
        min_rad=mr, dcsd=dc, thickness=tau, length=knot.total_length,
        ropelength=knot.total_length / tau, witness_vertex=vertex, witness_pair=pair)


def normalize_to_unit_thickness(knot: PolyKnot) -> PolyKnot:
    """Scale ``knot`` about the origin so that its thickness is 1."""
    tau = thickness_and_ropelength(knot).thickness
    return PolyKnot(knot.vertices / tau)
