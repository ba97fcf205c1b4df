import math

import numpy as np
import pytest

from patchfold.calculations.fans import (LEFT_TANGENT, RIGHT_TANGENT, a_fan, chain_angle, decide_split, fan_case,
                                         fan_contained, flip_split, obtuse_turn_splits, safe_flip_side)
from patchfold.calculations.prismatoid_model import DOWN, UP, at_height
from patchfold.calculations.regions import altitude_partition
from patchfold.calculations.search_harness import GeneratorConfig, instance_stream
from patchfold.config.dispatch import FAN_CASES
from patchfold.config.generator import SHAPE_BIASES
from patchfold.errors import InvalidInput


def test_sum_pi_fan_has_a_straight_chain_vertex(sum_pi):
    fan = a_fan(sum_pi, 0)
    assert fan.faces == (4, 5)
    assert fan.chain_vertices == (3, 4, 5)
    assert len(fan.chain) == 3
    assert len(fan.chain_angles) == 1
    assert fan.chain_angles[0] == pytest.approx(math.pi, abs=1e-9)
    assert fan.chain_angles[0] == pytest.approx(chain_angle(sum_pi, 0, [3, 4, 5], 1))
    assert fan.labels == (DOWN, UP)
    assert (fan.s, fan.t) == (1, 2)


def test_developed_chain_keeps_edge_lengths(sum_pi, drum_prismatoid):
    for P in (sum_pi, drum_prismatoid):
        for b in range(P.m):
            fan = a_fan(P, b)
            V = P.vertices
            for j in range(fan.size):
                u, w = fan.chain_vertices[j], fan.chain_vertices[j + 1]
                assert np.linalg.norm(fan.chain[j + 1] - fan.chain[j]) == pytest.approx(np.linalg.norm(V[w] - V[u]))


def test_empty_fan(sum_pi):
    fan = a_fan(sum_pi, 1)
    assert fan.size == 0 and not fan.has_up_faces
    assert fan_case(fan)['case'] == 'empty_fan'
    assert decide_split(at_height(sum_pi, 0.0), fan) == (0, 'empty_fan')
    with pytest.raises(InvalidInput):
        flip_split(fan, LEFT_TANGENT)


def test_fan_index_out_of_range(sum_pi):
    with pytest.raises(InvalidInput):
        a_fan(sum_pi, 3)


def test_case_table_covers_every_label_pair():
    for has_up in (False, True):
        for left in (UP, DOWN):
            for right in (UP, DOWN):
                rule = FAN_CASES[(has_up, left, right)]['rule']
                if has_up:
                    assert rule == 'safe_flip'
                else:
                    assert rule in ('attach_left', 'attach_right')


def test_hexagon_fans_are_all_up(hexagon):
    for b in range(hexagon.m):
        fan = a_fan(hexagon, b)
        assert fan.has_up_faces and (fan.s, fan.t) == (0, 1)
        assert fan_case(fan)['case'] == 'reflex_joint_flip_both'


def test_tangent_flips_pick_s_and_t(hexagon):
    fan = a_fan(hexagon, 0)
    assert flip_split(fan, LEFT_TANGENT) == fan.s
    assert flip_split(fan, RIGHT_TANGENT) == fan.t


def test_single_up_face_tangents_are_its_chain_ends(wings_prismatoid):
    fan = a_fan(wings_prismatoid, 1)
    assert fan.labels == (UP,)
    assert (fan.s, fan.t) == (0, 1)
    assert fan.tangent_faces == (0, 0)
    assert flip_split(fan, LEFT_TANGENT) == 0
    assert flip_split(fan, RIGHT_TANGENT) == 1
    down = a_fan(wings_prismatoid, 0)
    assert down.labels == (DOWN,)
    assert down.s is None and down.tangent_faces is None


def test_flat_containment_decides_the_safe_side(hexagon):
    flat = at_height(hexagon, 0.0)
    partition = altitude_partition(flat, check=False)
    assert fan_contained(flat, 0, 0, partition)
    assert not fan_contained(flat, 0, 1, partition)
    assert safe_flip_side(hexagon, a_fan(flat, 0), partition) == LEFT_TANGENT
    splits = [decide_split(flat, a_fan(flat, b), partition)[0] for b in range(hexagon.m)]
    assert splits == [0] * hexagon.m


def test_both_splits_fit_at_full_height(hexagon):
    partition = altitude_partition(hexagon)
    for b in range(hexagon.m):
        assert fan_contained(hexagon, b, 0, partition)
        assert fan_contained(hexagon, b, 1, partition)


def test_wings_case_decisions(wings_prismatoid):
    flat = at_height(wings_prismatoid, 0.0)
    partition = altitude_partition(flat, check=False)
    decisions = [decide_split(flat, a_fan(flat, b), partition) for b in range(flat.m)]
    assert decisions == [(0, 'convex_region'), (1, 'reflex_joint_flip_right'), (1, 'reflex_joint_flip_left')]


def test_sum_pi_case_decisions(sum_pi):
    flat = at_height(sum_pi, 0.0)
    splits = [decide_split(flat, a_fan(flat, b))[0] for b in range(flat.m)]
    assert splits == [1, 0, 0]


def test_obtuse_turn_heuristic_on_wings(wings_prismatoid):
    assert obtuse_turn_splits(wings_prismatoid) == [0, 0, 1]


@pytest.mark.parametrize('bias', sorted(SHAPE_BIASES))
def test_one_tangent_flip_is_safe_at_zero_height(bias):
    cfg = GeneratorConfig(seed=3, n_A=(3, 7), n_B=(3, 7), bias=bias)
    for k, P in instance_stream(cfg, 4):
        flat = at_height(P, 0.0)
        partition = altitude_partition(flat, check=False)
        for b in range(flat.m):
            fan = a_fan(flat, b)
            if not fan.has_up_faces:
                continue
            assert fan_contained(flat, b, fan.s, partition) or fan_contained(flat, b, fan.t, partition), (k, b)
            side = safe_flip_side(flat, fan, partition)
            assert fan_contained(flat, b, flip_split(fan, side), partition), (k, b, side)
