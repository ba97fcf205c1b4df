import math

import pytest

from patchfold.calculations.patch_model import (EDGE_NEIGHBORHOOD, VERTEX_NEIGHBORHOOD, convex_hull3, neighborhood,
                                                patch_from_faces, polyhedron_from_faces, prismatoid_polyhedron,
                                                total_curvature, vertex_curvature)
from patchfold.calculations.prismatoid_model import at_height
from patchfold.data.fixtures import COUNTEREXAMPLE_VERTICES
from patchfold.errors import DegenerateHull, InvalidInput, NotADisk


def test_counterexample_polyhedron(counterexample):
    poly, base = counterexample
    assert len(poly.faces) == 11
    assert total_curvature(poly) == pytest.approx(4 * math.pi)
    assert poly.vertex_id('b2') == 1


def test_counterexample_curvature_at_base_vertices(counterexample):
    poly, _ = counterexample
    assert math.degrees(vertex_curvature(poly, poly.vertex_id('b3'))) == pytest.approx(0.8264, abs=1e-3)
    assert math.degrees(vertex_curvature(poly, poly.vertex_id('b2'))) == pytest.approx(2.8271, abs=1e-3)


def test_counterexample_vertex_neighborhood(counterexample):
    poly, base = counterexample
    patch = neighborhood(poly, base, VERTEX_NEIGHBORHOOD)
    assert patch.faces == (0, 1, 2, 3, 4, 5, 6, 8, 9)
    assert set(patch.interior_vertices) == {0, 1, 2}
    assert len(patch.boundary) == 6


def test_exact_hull_of_rounded_coordinates_merges_faces():
    hull = convex_hull3(COUNTEREXAMPLE_VERTICES)
    sets = [set(f) for f in hull.faces]
    assert {5, 6, 7, 8} in sets
    assert any(len(f) >= 5 and {0, 1, 2} <= f for f in sets)


def test_platonic_solids_close_up(octahedron, icosahedron):
    for poly in (octahedron, icosahedron):
        assert total_curvature(poly) == pytest.approx(4 * math.pi)
    assert vertex_curvature(octahedron, 0) == pytest.approx(2 * math.pi - 4 * math.pi / 3)


def test_neighborhood_kinds(octahedron):
    assert len(neighborhood(octahedron, 0, EDGE_NEIGHBORHOOD).faces) == 4
    nv = neighborhood(octahedron, 0, VERTEX_NEIGHBORHOOD)
    assert len(nv.faces) == 7
    assert len(nv.boundary) == 3
    with pytest.raises(InvalidInput):
        neighborhood(octahedron, 0, 'ring')
    with pytest.raises(InvalidInput):
        neighborhood(octahedron, 99)


def test_non_disk_face_sets_are_rejected(octahedron):
    with pytest.raises(NotADisk):
        patch_from_faces(octahedron, [0, 6], 0)
    with pytest.raises(NotADisk):
        patch_from_faces(octahedron, range(8), 0)
    with pytest.raises(InvalidInput):
        patch_from_faces(octahedron, [1, 2], 0)


def test_prismatoid_polyhedron_matches_hull(hexagon):
    poly, base = prismatoid_polyhedron(hexagon)
    assert base == len(hexagon.faces)
    hull = convex_hull3(hexagon.vertices)
    assert {frozenset(f) for f in poly.faces} == {frozenset(f) for f in hull.faces}
    assert total_curvature(poly) == pytest.approx(4 * math.pi)


def test_flat_prismatoid_is_not_a_polyhedron(hexagon):
    with pytest.raises(DegenerateHull):
        prismatoid_polyhedron(at_height(hexagon, 0.0))


def test_banded_hexagon_top_curvature(hexagon):
    poly, _ = prismatoid_polyhedron(hexagon)
    degrees = [math.degrees(vertex_curvature(poly, v)) for v in hexagon.top_vertices]
    for j, value in enumerate(degrees):
        assert value == pytest.approx(7.5 if j % 2 == 0 else 2.0, abs=0.1)


def test_open_surface_is_not_a_polyhedron():
    with pytest.raises(InvalidInput):
        polyhedron_from_faces([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], [[0, 2, 1], [0, 1, 3]])


def test_coplanar_points_have_no_hull():
    with pytest.raises(DegenerateHull):
        convex_hull3([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]])
