"""Primitive geometry for closed polygonal space curves.

Points are plain ``numpy`` arrays of shape ``(3,)``.  A :class:`PolyKnot`
is immutable after construction and caches cumulative arclength so that
positions along the curve can be expressed either as ``(edge, t)`` or as an
arclength coordinate ``s``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Absolute tolerance for predicates on O(1)-normalized coordinates.
GEOM_TOL = 1e-9


class GeometryError(ValueError):
    """Raised for degenerate or invalid geometric input."""


def as_point(p) -> np.ndarray:
    arr = np.asarray(p, dtype=float).reshape(3)
    if not np.all(np.isfinite(arr)):
        raise GeometryError(f"non-finite coordinates: {arr}")
    return arr


@dataclass(frozen=True)
class Segment:
    start: np.ndarray
    end: np.ndarray

    def __post_init__(self):
        a, b = as_point(self.start), as_point(self.end)
        if np.array_equal(a, b):
            raise GeometryError("segment has zero length")
        object.__setattr__(self, "start", a)
        object.__setattr__(self, "end", b)

    @property
    def vector(self) -> np.ndarray:
        return self.end - self.start

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.end - self.start))

    def point(self, t: float) -> np.ndarray:
        return self.start + t * (self.end - self.start)


@dataclass(frozen=True)
class ArcPosition:
    """A point on a knot: edge index, parameter along that edge, arclength."""

    edge_index: int
    t: float
    s: float


@dataclass(frozen=True, eq=False)
class PolyKnot:
    """Closed polygon; edge ``i`` runs from vertex ``i`` to vertex ``i+1 mod n``."""

    vertices: np.ndarray
    cum_length: np.ndarray = field(init=False, repr=False)
    total_length: float = field(init=False)

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3:
            raise GeometryError("vertices must have shape (n, 3)")
        if v.shape[0] < 3:
            raise GeometryError("need at least 3 vertices")
        if not np.all(np.isfinite(v)):
            raise GeometryError("non-finite vertex coordinates")
        edges = np.roll(v, -1, axis=0) - v
        lengths = np.linalg.norm(edges, axis=1)
        if np.any(lengths == 0.0):
            i = int(np.flatnonzero(lengths == 0.0)[0])
            raise GeometryError(f"consecutive vertices {i} and {(i + 1) % len(v)} coincide")
        unit = edges / lengths[:, None]
        # cosine of angle between incoming and outgoing edge at each vertex
        cos_turn = np.einsum("ij,ij->i", np.roll(unit, 1, axis=0), unit)
        if np.any(cos_turn <= -1.0 + 1e-15):
            i = int(np.flatnonzero(cos_turn <= -1.0 + 1e-15)[0])
            raise GeometryError(f"edges meeting at vertex {i} are anti-parallel")
        v.setflags(write=False)
        cum = np.concatenate([[0.0], np.cumsum(lengths)])
        cum.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "cum_length", cum)
        object.__setattr__(self, "total_length", float(cum[-1]))

    def __len__(self) -> int:
        return self.vertices.shape[0]

    @property
    def n(self) -> int:
        return self.vertices.shape[0]

    @property
    def edges(self) -> np.ndarray:
        return np.roll(self.vertices, -1, axis=0) - self.vertices

    @property
    def edge_lengths(self) -> np.ndarray:
        return np.diff(self.cum_length)

    def segment(self, i: int) -> Segment:
        return Segment(self.vertices[i % self.n], self.vertices[(i + 1) % self.n])

    def bbox_diagonal(self) -> float:
        return float(np.linalg.norm(self.vertices.max(axis=0) - self.vertices.min(axis=0)))

    def adjacent(self, i: int, j: int) -> bool:
        """True if edges ``i`` and ``j`` are equal or share a vertex."""
        d = (i - j) % self.n
        return d in (0, 1, self.n - 1)

    def position(self, edge_index: int, t: float) -> ArcPosition:
        """Position on edge ``edge_index`` at parameter ``t`` in [0, 1].

        A position at the end of an edge is attributed to ``t = 0`` of the
        following edge.
        """
        i = int(edge_index) % self.n
        t = float(min(max(t, 0.0), 1.0))
        if t >= 1.0:
            i, t = (i + 1) % self.n, 0.0
        s = self.cum_length[i] + t * (self.cum_length[i + 1] - self.cum_length[i])
        if s >= self.total_length:
            s = 0.0
        return ArcPosition(i, t, float(s))

    def position_at(self, s: float) -> ArcPosition:
        s = float(s) % self.total_length
        i = int(np.searchsorted(self.cum_length, s, side="right")) - 1
        i = min(max(i, 0), self.n - 1)
        t = (s - self.cum_length[i]) / (self.cum_length[i + 1] - self.cum_length[i])
        return self.position(i, t)

    def point(self, pos: ArcPosition) -> np.ndarray:
        i = pos.edge_index
        return self.vertices[i] + pos.t * (self.vertices[(i + 1) % self.n] - self.vertices[i])

    def reversed(self) -> "PolyKnot":
        return PolyKnot(self.vertices[::-1].copy())


def circumradius(a, b, c) -> float:
    """Radius of the circle through three points; ``inf`` for collinear points."""
    a, b, c = as_point(a), as_point(b), as_point(c)
    ab, bc, ca = np.linalg.norm(b - a), np.linalg.norm(c - b), np.linalg.norm(a - c)
    if ab == 0.0 or bc == 0.0 or ca == 0.0:
        raise GeometryError("degenerate triple")
    twice_area = float(np.linalg.norm(np.cross(b - a, c - a)))
    if twice_area <= GEOM_TOL * GEOM_TOL * max(ab, bc, ca) ** 2:
        return math.inf
    return float(ab * bc * ca / (2.0 * twice_area))


def arc_length(knot: PolyKnot, u: ArcPosition, v: ArcPosition) -> float:
    """Length of the oriented arc of ``knot`` from ``u`` to ``v``."""
    d = (v.s - u.s) % knot.total_length
    return float(d)


def angle_at(a, p, b) -> float:
    """Angle in [0, pi] between ``a - p`` and ``b - p``."""
    a, p, b = as_point(a), as_point(p), as_point(b)
    u, w = a - p, b - p
    nu, nw = np.linalg.norm(u), np.linalg.norm(w)
    if nu == 0.0 or nw == 0.0:
        raise GeometryError("angle undefined: endpoint coincides with apex")
    # atan2 form stays accurate near 0 and pi
    return float(math.atan2(np.linalg.norm(np.cross(u, w)), float(np.dot(u, w))))


def rotation_matrix(axis, angle: float) -> np.ndarray:
    axis = as_point(axis)
    axis = axis / np.linalg.norm(axis)
    x, y, z = axis
    k = np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])
    return np.eye(3) + math.sin(angle) * k + (1.0 - math.cos(angle)) * (k @ k)


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def similarity_transform(knot: PolyKnot, rotation=None, scale: float = 1.0,
                         translation=None) -> PolyKnot:
    """Apply ``x -> scale * R x + translation`` to every vertex."""
    if not scale > 0:
        raise GeometryError("scale must be positive")
    rot = np.eye(3) if rotation is None else np.asarray(rotation, dtype=float)
    if rot.shape != (3, 3) or not np.allclose(rot.T @ rot, np.eye(3), atol=1e-10) \
            or np.linalg.det(rot) < 0:
        raise GeometryError("rotation must be orthogonal with determinant +1")
    shift = np.zeros(3) if translation is None else as_point(translation)
    return PolyKnot(scale * knot.vertices @ rot.T + shift)


def closest_points_segments(p0, p1, q0, q1):
    """Closest points between segments ``p0p1`` and ``q0q1`` (broadcasts).

    Returns ``(dist, s, t)`` with the closest points ``p0 + s (p1 - p0)`` and
    ``q0 + t (q1 - q0)``, ``s, t`` in [0, 1].
    """
    p0, p1, q0, q1 = (np.asarray(x, dtype=float) for x in (p0, p1, q0, q1))
    d1, d2, r = p1 - p0, q1 - q0, p0 - q0
    a = np.einsum("...i,...i", d1, d1)
    e = np.einsum("...i,...i", d2, d2)
    b = np.einsum("...i,...i", d1, d2)
    c = np.einsum("...i,...i", d1, r)
    f = np.einsum("...i,...i", d2, r)
    denom = a * e - b * b
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(denom > 1e-14 * a * e, (b * f - c * e) / denom, 0.0)
        s = np.clip(s, 0.0, 1.0)
        t = (b * s + f) / e
        t_clamped = np.clip(t, 0.0, 1.0)
        s = np.where(t != t_clamped, np.clip((b * t_clamped - c) / a, 0.0, 1.0), s)
    t = t_clamped
    diff = (p0 + s[..., None] * d1) - (q0 + t[..., None] * d2)
    return np.linalg.norm(diff, axis=-1), s, t
