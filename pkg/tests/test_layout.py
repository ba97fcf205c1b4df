import math

import numpy as np
import pytest

from patchfold.calculations.geom_core import angle_at, polygon_area
from patchfold.calculations.layout import Layout, base_layout, place_fan, place_top, shared_edge
from patchfold.calculations.overlap_verifier import layout_overlaps
from patchfold.calculations.prismatoid_model import surface_faces
from patchfold.calculations.unfolder import band_unfolding, petal_layout
from patchfold.errors import InvalidInput


def test_base_layout_keeps_base_in_place_and_b_triangles_outside(hexagon):
    L = base_layout(hexagon, surface_faces(hexagon))
    K = len(hexagon.faces)
    assert np.allclose(L[K].polygon, hexagon.B)
    assert L.roots() == [K]
    for i, k in enumerate(hexagon.structure.b_face):
        apex = L[k].polygon[2]
        b0, b1 = hexagon.B[i], hexagon.B[(i + 1) % hexagon.m]
        assert (b1[0] - b0[0]) * (apex[1] - b0[1]) - (b1[1] - b0[1]) * (apex[0] - b0[0]) < 0
    assert L.isometry_residual() < 1e-9


def test_petal_layout_is_isometric_and_every_face_hangs_off_the_base(drum_prismatoid):
    L = petal_layout(drum_prismatoid, [0] * drum_prismatoid.m, top=11)
    assert len(L) == len(drum_prismatoid.faces) + 2
    assert L.isometry_residual() < 1e-9
    K = len(drum_prismatoid.faces)
    assert all(L.tree_of(k) == K for k in L.faces)


def test_fan_split_out_of_range(drum_prismatoid):
    L = base_layout(drum_prismatoid, surface_faces(drum_prismatoid))
    with pytest.raises(InvalidInput):
        place_fan(L, drum_prismatoid, 0, len(drum_prismatoid.structure.fans[0]) + 1)


def test_top_must_hang_off_an_a_triangle(drum_prismatoid):
    L = base_layout(drum_prismatoid, surface_faces(drum_prismatoid))
    with pytest.raises(InvalidInput):
        place_top(L, drum_prismatoid, drum_prismatoid.structure.b_face[0])


def test_a_face_cannot_be_placed_twice(hexagon):
    L = base_layout(hexagon, surface_faces(hexagon))
    k = hexagon.structure.b_face[0]
    with pytest.raises(InvalidInput):
        L.place_child(len(hexagon.faces), k, (0, 1))


def test_hinge_must_be_shared(hexagon):
    L = base_layout(hexagon, surface_faces(hexagon))
    with pytest.raises(InvalidInput):
        L.place_child(len(hexagon.faces), hexagon.structure.a_face[0], (0, 1))
    with pytest.raises(InvalidInput):
        shared_edge(hexagon, 0, 6)


def test_band_layout_cuts_one_lateral_edge_and_top_edges(hexagon):
    L = band_unfolding(hexagon, 0)
    K = len(hexagon.faces)
    assert len(L) == K + 2
    cuts = L.cuts()
    # one lateral edge, m - 1 base edges and n - 1 top edges
    assert len(cuts) == 1 + (hexagon.m - 1) + (hexagon.n - 1)
    last, first = hexagon.faces[K - 1].vertices, hexagon.faces[0].vertices
    lateral_cut = tuple(sorted(set(last) & set(first)))
    assert lateral_cut in cuts


def test_placed_angle_sum_at_vertex_matches_face_angles(hexagon):
    L = petal_layout(hexagon, [0] * hexagon.m)
    v = hexagon.m  # first top vertex
    expected = 0.0
    V = hexagon.vertices
    for k in L.faces_at(v):
        f = hexagon.faces[k].vertices
        i = f.index(v)
        expected += angle_at(V[v], V[f[(i + 1) % 3]], V[f[i - 1]])
    assert L.placed_angle_sum(v) == pytest.approx(expected)


def test_rigid_motion_preserves_areas_and_overlap_verdict(drum_prismatoid):
    L = petal_layout(drum_prismatoid, [0] * drum_prismatoid.m, top=11)
    c, s = math.cos(0.7), math.sin(0.7)
    moved = L.transformed([[c, -s], [s, c]], [3.0, -2.0])
    for k in L.faces:
        assert abs(polygon_area(moved[k].polygon)) == pytest.approx(abs(polygon_area(L[k].polygon)))
    assert layout_overlaps(moved).overlapping == layout_overlaps(L).overlapping
    assert np.allclose(L.translated([1, 1])[0].polygon, L[0].polygon + 1)


def test_dict_round_trip_keeps_polygons_and_cuts(hexagon):
    L = band_unfolding(hexagon, 3)
    again = Layout.from_dict(L.to_dict())
    assert sorted(again.faces) == sorted(L.faces)
    for k in L.faces:
        assert np.allclose(again[k].polygon, L[k].polygon)
    assert again.cuts() == L.cuts()
    assert again.meta == L.meta


def test_malformed_layout_dict():
    with pytest.raises(InvalidInput):
        Layout.from_dict({'faces': [{'id': 0}]})
