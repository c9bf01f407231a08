import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import regular_polygon
from ropelength import load_fixture
from ropelength.bounds import OrderType
from ropelength.geometry import PolyKnot, Segment, closest_points_segments
from ropelength.oracles import random_segment_quadruple, sampled_knot_transversals, OracleConfig
from ropelength.quadrisecant import (Degenerate, Quadrisecant, TransversalLine, TrisecantClass,
                                     classify_order, classify_trisecant, cyclic_order,
                                     find_quadrisecants, midsegment,
                                     transversals_of_four_segments)

X_AXIS_SEGMENTS = [Segment([0, -1, -1], [0, 1, 1]), Segment([1, -1, 1], [1, 1, -1]),
                   Segment([2, -1, -1], [2, 1, 1]), Segment([3, -1, 1], [3, 1, -1])]


def seg_distance(line, seg):
    far = 1e4
    return closest_points_segments(line.point - far * line.direction,
                                   line.point + far * line.direction, seg.start, seg.end)[0]


def test_x_axis_transversal():
    lines = transversals_of_four_segments(*X_AXIS_SEGMENTS)
    assert isinstance(lines, list)
    axis = [l for l in lines if np.linalg.norm(np.cross(l.direction, [1, 0, 0])) < 1e-12]
    assert len(axis) == 1
    assert np.allclose(axis[0].point, 0, atol=1e-12)
    assert axis[0].segment_params == pytest.approx((0.5, 0.5, 0.5, 0.5), abs=1e-12)


def test_coplanar_segments_are_degenerate():
    segs = [Segment([0, k, 0], [3, k + 0.5 * k, 0]) for k in range(1, 4)]
    segs.append(Segment([0, -1, 0], [2, 5, 0]))
    assert isinstance(transversals_of_four_segments(*segs), Degenerate)


def test_four_lines_through_a_point_are_degenerate():
    dirs = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]
    segs = [Segment(-np.array(d, float), np.array(d, float)) for d in dirs]
    assert isinstance(transversals_of_four_segments(*segs), Degenerate)


def test_transversal_line_invariants():
    rng = np.random.default_rng(11)
    for _ in range(50):
        segs, _ = random_segment_quadruple(rng, planted=True)
        for line in transversals_of_four_segments(*segs):
            assert np.linalg.norm(line.direction) == pytest.approx(1.0, abs=1e-14)
            assert abs(np.dot(line.direction, line.moment)) < 1e-9
            assert np.allclose(line.plucker[3:], np.cross(line.point, line.direction))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.booleans())
def test_solutions_meet_all_segments(seed, planted):
    segs, truth = random_segment_quadruple(np.random.default_rng(seed), planted)
    lines = transversals_of_four_segments(*segs)
    if isinstance(lines, Degenerate):
        return
    for line in lines:
        assert max(seg_distance(line, s) for s in segs) < 1e-7
    if planted:
        d, p = truth
        assert any(np.linalg.norm(np.cross(l.direction, d)) < 1e-7 and l.distance_to(p) < 1e-7
                   for l in lines)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(1e-3, 1e3), st.booleans())
def test_solver_is_similarity_invariant(seed, scale, planted):
    rng = np.random.default_rng(seed)
    segs, _ = random_segment_quadruple(rng, planted)
    shift = rng.normal(size=3) * 5
    moved = [Segment(scale * s.start + shift, scale * s.end + shift) for s in segs]
    a, b = transversals_of_four_segments(*segs), transversals_of_four_segments(*moved)
    if isinstance(a, Degenerate) or isinstance(b, Degenerate):
        return
    # roots right at a segment end may flip in or out of the closed segment
    if len(a) == len(b):
        for la, lb in zip(sorted(a, key=lambda l: l.segment_params),
                          sorted(b, key=lambda l: l.segment_params)):
            assert la.segment_params == pytest.approx(lb.segment_params, abs=1e-7)


# --- order types -------------------------------------------------------------

def test_classify_order_examples():
    assert classify_order(0.1, 0.3, 0.5, 0.7, 1.0) is OrderType.SIMPLE
    assert classify_order(0.1, 0.3, 0.8, 0.6, 1.0) is OrderType.FLIPPED
    assert classify_order(0.0, 0.5, 0.25, 0.75, 1.0) is OrderType.ALTERNATING
    with pytest.raises(ValueError, match="coincident"):
        classify_order(0.1, 0.1, 0.5, 0.7, 1.0)
    with pytest.raises(ValueError):
        classify_order(0.0, 0.3, 0.5, 1.0, 1.0)   # 0 and 1 coincide on the circle


def _adjacency_class(knot_order: str) -> OrderType:
    edges = {frozenset(p) for p in zip(knot_order, knot_order[1:] + knot_order[0])}
    by_edges = {OrderType.SIMPLE: "abcd", OrderType.FLIPPED: "abdc", OrderType.ALTERNATING: "acbd"}
    for otype, word in by_edges.items():
        if edges == {frozenset(p) for p in zip(word, word[1:] + word[0])}:
            return otype
    raise AssertionError(knot_order)


@settings(max_examples=50)
@given(st.lists(st.floats(0, 0.999), min_size=4, max_size=4, unique=True))
def test_classify_order_all_permutations(coords):
    if min(abs(a - b) for a, b in itertools.combinations(coords, 2)) < 1e-9:
        return
    for perm in itertools.permutations(coords):
        otype = classify_order(*perm, 1.0)
        assert otype is _adjacency_class(cyclic_order(perm, 1.0))
        # reversing the line, reversing the knot, and moving the origin
        assert classify_order(*perm[::-1], 1.0) is otype
        assert classify_order(*[(1.0 - c) % 1.0 for c in perm], 1.0) is otype
        assert classify_order(*[(c + 0.377) % 1.0 for c in perm], 1.0) is otype


def test_classify_trisecant():
    assert classify_trisecant(0.0, 0.2, 0.5, 1.0) is TrisecantClass.DIRECT
    assert classify_trisecant(0.0, 0.7, 0.5, 1.0) is TrisecantClass.REVERSED
    with pytest.raises(ValueError):
        classify_trisecant(0.1, 0.1, 0.5, 1.0)


@settings(max_examples=100)
@given(st.lists(st.floats(0, 0.999), min_size=3, max_size=3, unique=True))
def test_trisecant_orientation_flips_class(coords):
    if min(abs(a - b) for a, b in itertools.combinations(coords, 2)) < 1e-9:
        return
    rev = [(1.0 - c) % 1.0 for c in coords]
    if min(abs(a - b) for a, b in itertools.combinations(rev, 2)) < 1e-9:
        return
    assert classify_trisecant(*coords, 1.0) is not classify_trisecant(*rev, 1.0)
    # reversing the trisecant changes the class as well
    assert classify_trisecant(*coords, 1.0) is not classify_trisecant(*coords[::-1], 1.0)


def test_midsegment():
    pts = tuple(np.array([x, 0.0, 0.0]) for x in range(4))
    line = TransversalLine(np.zeros(3), np.array([1.0, 0, 0]))
    q = Quadrisecant(line, pts, (), (0.0, 1.0, 2.0, 3.0), OrderType.SIMPLE, 1.0, 1.0, 1.0)
    seg = midsegment(q)
    assert np.allclose(seg.start, [1, 0, 0]) and np.allclose(seg.end, [2, 0, 0])
    assert seg.length == q.s
    flipped = Quadrisecant(TransversalLine(np.zeros(3), np.array([-1.0, 0, 0])), pts[::-1], (),
                           (-3.0, -2.0, -1.0, 0.0), OrderType.SIMPLE, 1.0, 1.0, 1.0)
    assert {tuple(midsegment(flipped).start), tuple(midsegment(flipped).end)} == \
        {tuple(seg.start), tuple(seg.end)}


# --- scanning knots ------------------------------------------------------------

def test_convex_polygon_has_no_quadrisecants():
    assert len(find_quadrisecants(load_fixture("convex20"))) == 0
    assert len(find_quadrisecants(PolyKnot(regular_polygon(9)))) == 0


def test_trefoil_has_alternating_quadrisecant(trefoil_scan):
    counts = trefoil_scan.counts()
    assert counts[OrderType.ALTERNATING] >= 1
    assert sum(counts.values()) == len(trefoil_scan)


def test_trefoil_quadrisecant_records(unit_trefoil, trefoil_scan):
    n = unit_trefoil.n
    for q in trefoil_scan:
        assert q.collinearity_residual() < 1e-7
        assert all(b > a for a, b in zip(q.line_params, q.line_params[1:]))
        assert min(q.r, q.s, q.t) > 0
        assert q.positions[0].s < q.positions[3].s
        for p, x in zip(q.positions, q.points):
            assert np.allclose(unit_trefoil.point(p), x)
        for a, b in itertools.combinations(q.edges, 2):
            assert (a - b) % n not in (0, 1, n - 1)
        assert q.r == pytest.approx(np.linalg.norm(q.points[1] - q.points[0]))
    keys = [(min(q.edges), q.positions[0].s) for q in trefoil_scan]
    assert keys == sorted(keys)


def test_scan_independent_of_workers(trefoil):
    a = find_quadrisecants(trefoil, workers=1)
    b = find_quadrisecants(trefoil, workers=3)
    assert len(a) == len(b)
    for qa, qb in zip(a, b):
        assert qa.edges == qb.edges
        assert np.array_equal(qa.line.point, qb.line.point)
        assert np.array_equal(np.array(qa.points), np.array(qb.points))
    assert (a.degenerate_quadruples, a.dedup_merges) == (b.degenerate_quadruples, b.dedup_merges)


def test_reversed_knot_keeps_types(trefoil, trefoil_scan):
    rev = find_quadrisecants(trefoil.reversed())
    assert rev.counts() == trefoil_scan.counts()


def test_quadrisecant_through_vertex_is_attributed_to_next_edge():
    # a zigzag whose vertices 1, 3, 5, 7 sit exactly on the x-axis
    verts = [[-1, -1, 0.3], [0, 0, 0], [1, 1, -0.4], [2, 0, 0], [3, -1, 0.5], [4, 0, 0],
             [5, 1, -0.2], [6, 0, 0], [7, -1, 0.1], [7, -6, 3], [-1, -6, 3]]
    scan = find_quadrisecants(PolyKnot(verts))
    axis = [q for q in scan if np.linalg.norm(np.cross(q.line.direction, [1, 0, 0])) < 1e-9]
    assert len(axis) == 1
    assert [p.t for p in axis[0].positions] == [0.0] * 4
    assert sorted(axis[0].edges) == [1, 3, 5, 7]


@pytest.mark.parametrize("name", ["simple_unknot", "figure_eight32"])
def test_scan_matches_sampler(name):
    knot = load_fixture(name)
    ref = sampled_knot_transversals(knot.vertices, OracleConfig(sampler_resolution=64))
    scan = find_quadrisecants(knot)
    assert len(scan) == len(ref)
    for _, line in ref:
        assert any(np.linalg.norm(np.cross(line.direction, q.line.direction)) < 1e-6
                   and q.line.distance_to(line.point) < 1e-6 for q in scan)


def test_simple_unknot_fixture_has_simple_quadrisecant():
    scan = find_quadrisecants(load_fixture("simple_unknot"))
    assert scan.counts()[OrderType.SIMPLE] >= 1
    assert scan.counts()[OrderType.ALTERNATING] == 0
