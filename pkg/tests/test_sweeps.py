import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from patchfold.calculations.search_harness import GeneratorConfig, instance_stream
from patchfold.calculations.sweeps import (STRAIGHT, angle_monotonicity_check, apex_track_check, canonical_frame,
                                           chain_angle_facts_check, closed_form_cos, hull_combinatorics_check,
                                           lateral_angle_checks, ray_check, straight_chain_gap)
from patchfold.config.generator import SHAPE_BIASES
from patchfold.errors import InvalidInput

HEIGHTS = [0.05, 0.2, 0.5, 1.0, 2.0, 5.0, 20.0]
coords = st.floats(min_value=-3, max_value=3, allow_nan=False, allow_infinity=False)


@given(coords, coords)
@settings(max_examples=150, deadline=None)
def test_top_angles_move_toward_right_angle(x, y):
    assume(math.hypot(x, y) > 0.05 and math.hypot(x + 1, y) > 0.05)
    report = angle_monotonicity_check((-1.0, 0.0), (0.0, 0.0), (x, y), HEIGHTS)
    for name in ('a1', 'a2'):
        assert report[name]['residual'] < 1e-9
        assert report[name]['monotone']
    assert report['a1']['x'] == pytest.approx(x, abs=1e-12)
    assert report['a1']['y'] == pytest.approx(y, abs=1e-12)


def test_canonical_frame_ignores_rigid_motion_and_scale():
    b, a1, a2 = np.array([2.0, 1.0]), np.array([3.0, 3.0]), np.array([4.0, 1.5])
    c, s = math.cos(1.1), math.sin(1.1)
    R = np.array([[c, -s], [s, c]])
    moved = [2.5 * (R @ p) + [7.0, -3.0] for p in (b, a1, a2)]
    assert np.allclose(canonical_frame(b, a1, a2), canonical_frame(*moved))
    assert np.allclose(canonical_frame((-1, 0), (0, 0), (0.3, 0.4)), [0.3, 0.4])


def test_closed_form_at_zero_height_is_the_planar_angle():
    x, y = 0.6, 0.8
    assert closed_form_cos(x, y, 0.0) == pytest.approx(math.cos(math.pi - math.atan2(y, x)))


def test_angle_check_rejects_bad_input():
    with pytest.raises(InvalidInput):
        angle_monotonicity_check((-1, 0), (0, 0), (0, 0), HEIGHTS)
    with pytest.raises(InvalidInput):
        angle_monotonicity_check((-1, 0), (0, 0), (1, 1), [1.0, 0.5])


def test_sum_pi_chain_vertex_stays_straight(sum_pi):
    report = chain_angle_facts_check(sum_pi, 0)
    assert report['ok']
    assert report['vertices'][1]['vertex'] == 4
    assert report['vertices'][1]['class'] == STRAIGHT
    assert straight_chain_gap(sum_pi, 0) < 1e-9


def test_hexagon_structure_is_stable_at_its_own_height(hexagon):
    report = hull_combinatorics_check(hexagon, [hexagon.z / hexagon.diameter])
    assert report['same_structure']
    assert report['hull_agrees']
    assert report['mismatches'] == []


def test_hexagon_rays_and_apex_tracks(hexagon):
    assert ray_check(hexagon)['ok']
    for i in range(hexagon.m):
        track = apex_track_check(hexagon, i)
        assert track['monotone']
        assert track['residual'] < 1e-9


def test_hexagon_top_angles(hexagon):
    report = lateral_angle_checks(hexagon)
    assert report['ok']
    assert sorted(report['faces']) == [k for k, f in enumerate(hexagon.faces) if f.kind == 'A']


# =============================================================================
# RANDOM INSTANCES
# =============================================================================

@pytest.fixture(scope='module', params=sorted(SHAPE_BIASES))
def random_instances(request):
    cfg = GeneratorConfig(seed=3, n_A=(3, 7), n_B=(3, 7), bias=request.param)
    return [P for _, P in instance_stream(cfg, 3)]


def test_random_hull_structure_is_stable(random_instances):
    for P in random_instances:
        report = hull_combinatorics_check(P)
        assert report['same_structure'] and report['hull_agrees'], P.to_dict()


def test_random_rays_and_apex_tracks(random_instances):
    for P in random_instances:
        assert ray_check(P)['ok'], P.to_dict()
        for i in range(P.m):
            track = apex_track_check(P, i)
            assert track['monotone'] and track['residual'] < 1e-9, (P.to_dict(), i)


def test_random_chain_facts(random_instances):
    for P in random_instances:
        assert all(chain_angle_facts_check(P, b)['ok'] for b in range(P.m)), P.to_dict()


def test_random_top_angles(random_instances):
    for P in random_instances:
        assert lateral_angle_checks(P)['ok'], P.to_dict()
