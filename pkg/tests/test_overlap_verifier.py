import math

import numpy as np
import pytest

from patchfold.calculations.layout import Layout
from patchfold.calculations.overlap_verifier import (CONTAINED_VERTEX, CROSSING, angle_gap, cross_check_overlaps,
                                                     find_witness, layout_overlaps, polygons_overlap, separation)
from patchfold.calculations.patch_model import VERTEX_NEIGHBORHOOD, neighborhood
from patchfold.calculations.unfolder import band_unfoldings, enumerate_petal_unfoldings, petal_layout
from patchfold.errors import InvalidInput, VertexNotSurrounded

SQUARE = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)


def two_face_layout(first, second):
    L = Layout(None, [(0, 1, 2), (3, 4, 5)])
    L.place_root(0, polygon=first)
    L.place_root(1, polygon=second)
    return L


def test_separation_sign():
    assert separation(SQUARE, SQUARE + [2.0, 0.0]) == pytest.approx(1.0)
    assert separation(SQUARE, SQUARE + [0.5, 0.0]) == pytest.approx(-0.5)
    assert separation(SQUARE, SQUARE + [1.0, 0.0]) == pytest.approx(0.0)


def test_touching_is_not_overlapping():
    assert not polygons_overlap(SQUARE, SQUARE + [1.0, 0.0], 1e-9)
    assert not polygons_overlap(SQUARE, SQUARE + [1.0, 1.0], 1e-9)
    assert polygons_overlap(SQUARE, SQUARE + [0.5, 0.5], 1e-9)
    assert polygons_overlap(SQUARE, SQUARE[::-1] + [0.5, 0.5], 1e-9)


def test_witness_kinds():
    point, kind = find_witness(SQUARE, SQUARE + [0.5, 0.5], 1e-9)
    assert kind == CONTAINED_VERTEX
    assert np.allclose(point, [1, 1])
    bar = np.array([[-2, -0.1], [2, -0.1], [2, 0.1], [-2, 0.1]])
    point, kind = find_witness(bar, bar[:, ::-1][::-1], 1e-9)
    assert kind == CROSSING
    assert abs(point[0]) <= 2 + 1e-12 and abs(point[1]) <= 2 + 1e-12


def test_layout_clearance_and_witnesses():
    tri = np.array([[0, 0], [1, 0], [0, 1]], dtype=float)
    apart = layout_overlaps(two_face_layout(tri, tri + [2.0, 0.0]))
    assert not apart.overlapping
    assert apart.min_clearance == pytest.approx(1.0)

    touching = layout_overlaps(two_face_layout(tri, np.array([[1, 0], [2, 0], [1, 1]], dtype=float)))
    assert not touching.overlapping and touching.min_clearance is None

    hit = layout_overlaps(two_face_layout(tri, tri + [0.2, 0.2]))
    assert hit.overlapping and hit.pairs == [(0, 1)]
    assert hit.to_dict()['witnesses'][0]['faces'] == [0, 1]


def test_shapely_cross_check_agrees(hexagon, drum_prismatoid):
    for _, L in band_unfoldings(hexagon):
        assert bool(cross_check_overlaps(L)) == layout_overlaps(L).overlapping
    clean = petal_layout(drum_prismatoid, [0] * drum_prismatoid.m)
    assert cross_check_overlaps(clean) == []


def test_angle_gap_is_the_curvature_at_interior_vertices(counterexample):
    poly, base = counterexample
    patch = neighborhood(poly, base, VERTEX_NEIGHBORHOOD)
    _, L = next(enumerate_petal_unfoldings(patch))
    b2, b3 = poly.vertex_id('b2'), poly.vertex_id('b3')
    assert angle_gap(L, b2).degrees == pytest.approx(2.8271, abs=1e-3)
    assert angle_gap(L, b3).degrees == pytest.approx(0.8264, abs=1e-3)
    assert angle_gap(L, b3).to_dict()['faces'] == sorted(L.faces_at(b3))


def test_angle_gap_across_trees(octahedron):
    L = Layout(octahedron.vertices, octahedron.faces)
    L.place_root(0)
    L.place_root(1)
    with pytest.raises(VertexNotSurrounded) as info:
        angle_gap(L, 2)
    assert set(info.value.details['partial_sums']) == {0, 1}
    with pytest.raises(InvalidInput):
        angle_gap(L, 5)
    assert angle_gap(L, 0).gap == pytest.approx(2 * math.pi - math.pi / 3)
