import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import regular_polygon
from ropelength.geometry import GeometryError, PolyKnot, random_rotation, similarity_transform
from ropelength.thickness import (check_embedded, dcsd, min_rad, normalize_to_unit_thickness,
                                  thickness_and_ropelength, vertex_radii)


def test_unit_square_exact():
    rep = thickness_and_ropelength(PolyKnot([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]]))
    assert rep.min_rad == 0.5
    assert rep.dcsd == 1.0
    assert rep.thickness == 1.0
    assert rep.ropelength == 4.0
    a, b = rep.witness_pair
    assert {(a.edge_index, a.t), (b.edge_index, b.t)} == {(0, 0.5), (2, 0.5)}


def test_rectangle_dcsd_is_short_side():
    rep = thickness_and_ropelength(PolyKnot([[0, 0, 0], [2, 0, 0], [2, 1, 0], [0, 1, 0]]))
    assert rep.dcsd == pytest.approx(1.0, abs=1e-15)
    assert rep.min_rad == 0.5


def test_equilateral_triangle():
    # dcsd comes from a vertex and the midpoint of the opposite edge
    rep = thickness_and_ropelength(PolyKnot([[0, 0, 0], [1, 0, 0], [0.5, math.sqrt(3) / 2, 0]]))
    assert rep.min_rad == pytest.approx(1 / (2 * math.sqrt(3)), rel=1e-14)
    assert rep.dcsd == pytest.approx(math.sqrt(3) / 2, rel=1e-14)
    assert rep.ropelength == pytest.approx(3 * math.sqrt(3), rel=1e-14)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 8, 12, 31])
def test_regular_polygon_ropelength(n):
    rep = thickness_and_ropelength(PolyKnot(regular_polygon(n)))
    assert rep.ropelength == pytest.approx(n * math.tan(math.pi / n), abs=1e-12)


def test_512_gon_close_to_pi():
    rep = thickness_and_ropelength(PolyKnot(regular_polygon(512)))
    assert abs(rep.ropelength - math.pi) < 1e-4
    assert rep.ropelength == pytest.approx(512 * math.tan(math.pi / 512), rel=1e-11)


def test_straight_vertex_radius_is_infinite():
    k = PolyKnot([[0, 0, 0], [1, 0, 0], [2, 0, 0], [2, 1, 0], [0, 1, 0]])
    assert vertex_radii(k)[1] == math.inf
    assert min_rad(k)[0] == 0.5


def test_nonembedded_raises():
    bowtie = PolyKnot([[0, 0, 0], [2, 0, 0], [2, 1, 0], [1, -1, 0]])
    with pytest.raises(GeometryError, match="not embedded"):
        check_embedded(bowtie)


def test_dcsd_never_below_embedding_distance(trefoil):
    value, pair = dcsd(trefoil)
    assert value >= check_embedded(trefoil) - 1e-12
    a, b = pair
    assert np.linalg.norm(trefoil.point(a) - trefoil.point(b)) == pytest.approx(value)


def test_normalize(trefoil):
    unit = normalize_to_unit_thickness(trefoil)
    assert thickness_and_ropelength(unit).thickness == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 40), st.floats(0.001, 1000), st.integers(0, 2**32 - 1))
def test_ropelength_scale_invariant(n, scale, seed):
    rng = np.random.default_rng(seed)
    k = PolyKnot(regular_polygon(n))
    moved = similarity_transform(k, random_rotation(rng), scale, rng.normal(size=3) * 10)
    assert thickness_and_ropelength(moved).ropelength == pytest.approx(
        thickness_and_ropelength(k).ropelength, rel=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_dcsd_pair_is_critical(seed):
    """At interior witness points the chord is perpendicular to both edges."""
    rng = np.random.default_rng(seed)
    u = np.sort(rng.uniform(0, 2 * np.pi, 9))
    r = rng.uniform(1, 3, 9)
    verts = np.column_stack([r * np.cos(u), r * np.sin(u), rng.uniform(-0.3, 0.3, 9)])
    try:
        k = PolyKnot(verts)
        value, pair = dcsd(k)
    except GeometryError:
        return
    if pair is None:
        return
    chord = k.point(pair[1]) - k.point(pair[0])
    assert np.linalg.norm(chord) == pytest.approx(value)
    for pos in pair:
        if pos.t > 0:
            tangent = k.edges[pos.edge_index] / k.edge_lengths[pos.edge_index]
            assert abs(np.dot(chord, tangent)) < 1e-9 * value
