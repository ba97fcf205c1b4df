"""
A-Fans
Structure of the A-triangles at one base vertex: the a-chain, its
convex/reflex segmentation, the up-face run, and the split decisions used by
the petal unfolders.

Split convention: split m sends fan triangles 0..m-1 to the left B-triangle
(base edge b-1) and the rest to the right B-triangle (base edge b). Split 0
everywhere is the all-ccw petal unfolding.
"""
import math
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from patchfold.config.dispatch import EMPTY_FAN_CASE, FAN_CASES
from patchfold.calculations.geom_core import angle_at
from patchfold.calculations.layout import base_layout, place_fan
from patchfold.calculations.prismatoid_model import (DOWN, UP, Prismatoid, at_height, fan_chain,
                                                     surface_faces)
from patchfold.calculations.regions import AltitudePartition, altitude_partition, polygon_in_region
from patchfold.errors import InvalidInput, NoSafeFlip

logger = logging.getLogger(__name__)

LEFT_TANGENT = 'LeftTangent'
RIGHT_TANGENT = 'RightTangent'


@dataclass(frozen=True, eq=False)
class AFan:
    b: int
    faces: Tuple[int, ...]           # A-triangle ids, left to right
    left_face: int                   # B-triangle on base edge b-1
    right_face: int                  # B-triangle on base edge b
    chain_vertices: Tuple[int, ...]  # c_0..c_k
    chain: np.ndarray                # (k+1, 2) a-chain developed from the left B-triangle
    chain_angles: Tuple[float, ...]  # alpha_j at interior chain vertices j = 1..k-1
    labels: Tuple[str, ...]          # UP/DOWN per fan triangle
    left_label: str
    right_label: str
    s: Optional[int]                 # chain index of the left tangent c_s (None without up-faces)
    t: Optional[int]                 # chain index of the right tangent c_t, always > s

    @property
    def size(self) -> int:
        return len(self.faces)

    @property
    def has_up_faces(self) -> bool:
        return self.s is not None

    @property
    def tangent_faces(self) -> Optional[Tuple[int, int]]:
        """First and last up-face; they coincide when a single up-face touches both tangents."""
        return None if self.s is None else (self.s, self.t - 1)

    @property
    def reflex(self) -> Tuple[int, ...]:
        return tuple(j for j, a in enumerate(self.chain_angles, start=1) if a > math.pi)

    def segmentation(self) -> Tuple[range, range, range]:
        """(convex prefix, reflex middle, convex suffix) over interior chain indices 1..k-1."""
        k = self.size
        if k < 2:
            return range(1, 1), range(1, 1), range(1, 1)
        refl = self.reflex
        if not refl:
            return range(1, k), range(k, k), range(k, k)
        lo, hi = refl[0], refl[-1] + 1
        return range(1, lo), range(lo, hi), range(hi, k)


def chain_angle(P: Prismatoid, b: int, chain: List[int], j: int) -> float:
    """alpha_j: sum of the two fan-triangle angles at interior chain vertex c_j."""
    V = P.vertices
    c = V[chain[j]]
    return angle_at(c, V[b], V[chain[j - 1]]) + angle_at(c, V[b], V[chain[j + 1]])


def a_fan(P: Prismatoid, b: int) -> AFan:
    """
    A-fan at base vertex b

    The chain is developed by attaching every fan triangle to the left
    B-triangle; interior chain angles are the 3D angle sums, so they match the
    developed chain.

    The tangents b->c_s and b->c_t bound the run of up-faces: up-face j has
    chain edge c_j c_{j+1}, so s is the first up index and t is one past the
    last. s and t are split indices as well, and with a single up-face they
    are its two chain ends (t = s + 1). Counted in faces instead,
    tangent_faces gives (s, s) for that fan.
    """
    if not 0 <= b < P.m:
        raise InvalidInput(f"Base vertex {b} out of range 0..{P.m - 1}")
    st = P.structure
    fan = st.fans[b]
    chain_ids = fan_chain(P, b)
    left, right = st.b_face[(b - 1) % P.m], st.b_face[b]

    L = base_layout(P, surface_faces(P))
    place_fan(L, P, b, len(fan))
    points = [L[left].image(chain_ids[0])] + [L[k].image(P.faces[k].vertices[0]) for k in fan]

    labels = tuple(P.faces[k].orientation for k in fan)
    ups = [i for i, lab in enumerate(labels) if lab == UP]
    s, t = (ups[0], ups[-1] + 1) if ups else (None, None)
    angles = tuple(chain_angle(P, b, chain_ids, j) for j in range(1, len(chain_ids) - 1))
    return AFan(b=b, faces=tuple(fan), left_face=left, right_face=right, chain_vertices=tuple(chain_ids),
                chain=np.array(points), chain_angles=angles, labels=labels,
                left_label=P.faces[left].orientation, right_label=P.faces[right].orientation, s=s, t=t)


def fan_case(fan: AFan) -> Dict:
    if fan.size == 0:
        return EMPTY_FAN_CASE
    return FAN_CASES[(fan.has_up_faces, fan.left_label, fan.right_label)]


def fan_contained(P: Prismatoid, b: int, split: int, partition: Optional[AltitudePartition] = None) -> bool:
    """Are the fan triangles, placed with this split, inside the altitude region R_b?"""
    partition = partition or altitude_partition(P, check=False)
    L = base_layout(P, surface_faces(P))
    placed = place_fan(L, P, b, split)
    region = partition.regions[b]
    return all(polygon_in_region(L[k].polygon, region, P.tolerance.eps_len) for k in placed)


def flip_split(fan: AFan, side: str) -> int:
    """LeftTangent keeps the down prefix on the left (split s); RightTangent splits at t."""
    if not fan.has_up_faces:
        raise InvalidInput(f"Fan at b{fan.b} has no up-faces to flip")
    return fan.s if side == LEFT_TANGENT else fan.t


def safe_flip_side(P: Prismatoid, fan: AFan, flat_partition: Optional[AltitudePartition] = None) -> str:
    """
    Tangent across which the up-faces can be flipped without leaving R_b

    Both candidates are tried on the flat prismatoid. When both are safe the
    side whose receiving B-triangle is a down-face wins, otherwise Left.

    Raises:
        NoSafeFlip: neither flip stays inside the region
    """
    if not fan.has_up_faces:
        raise InvalidInput(f"Fan at b{fan.b} has no up-faces to flip")
    flat = at_height(P, 0.0)
    partition = flat_partition or altitude_partition(flat, check=False)
    left_ok = fan_contained(flat, fan.b, fan.s, partition)
    right_ok = fan_contained(flat, fan.b, fan.t, partition)
    if left_ok and right_ok:
        # LeftTangent sends the flipped group to the right B-triangle and vice versa
        if fan.right_label == DOWN and fan.left_label != DOWN:
            return LEFT_TANGENT
        if fan.left_label == DOWN and fan.right_label != DOWN:
            return RIGHT_TANGENT
        return LEFT_TANGENT
    if left_ok:
        return LEFT_TANGENT
    if right_ok:
        return RIGHT_TANGENT
    raise NoSafeFlip(f"Neither flip keeps the fan at b{fan.b} inside its altitude region",
                     details={'b': fan.b, 's': fan.s, 't': fan.t, 'prismatoid': P.to_dict()})


def decide_split(P: Prismatoid, fan: AFan, flat_partition: Optional[AltitudePartition] = None) -> Tuple[int, str]:
    """
    Split for one fan of the flat prismatoid, by the fan case table

    Returns:
        (split, case name)
    """
    case = fan_case(fan)
    rule = case['rule']
    if rule == 'none':
        split = 0
    elif rule == 'attach_right':
        split = 0
    elif rule == 'attach_left':
        split = fan.size
    else:
        split = flip_split(fan, safe_flip_side(P, fan, flat_partition))
    logger.debug(f"b{fan.b}: case {case['case']} -> split {split}/{fan.size}")
    return split, case['case']


def obtuse_turn_splits(P: Prismatoid) -> List[int]:
    """
    Obtuse-angle turning heuristic

    A fan turns away from an obtuse corner: if the first triangle is obtuse
    at the chain vertex it shares with the left B-triangle, the whole fan goes
    right; if the last is obtuse at the vertex it shares with the right
    B-triangle, it goes left; otherwise it goes right. No overlap guarantee.
    """
    V = P.vertices
    splits = []
    for b in range(P.m):
        fan = P.structure.fans[b]
        if not fan:
            splits.append(0)
            continue
        chain = fan_chain(P, b)
        first_angle = angle_at(V[chain[0]], V[b], V[chain[1]])
        last_angle = angle_at(V[chain[-1]], V[b], V[chain[-2]])
        if first_angle > math.pi / 2:
            splits.append(0)
        elif last_angle > math.pi / 2:
            splits.append(len(fan))
        else:
            splits.append(0)
    return splits
