"""
Regions
Base unfolding of a prismatoid, its altitude rays and the regions they cut
out of the plane, plus the diamonds and V-wedges used for nonobtuse inputs.

A region is a boundary chain with either two unbounded end rays (head at
the first chain point, tail at the last) or, without rays, a closed polygon.
Membership is closed: points within eps of the boundary belong to it.
"""
import math
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from patchfold.calculations.geom_core import (Ray2, cross2, outward_normal,
                                              point_ray_distance, point_segment_distance,
                                              ray_intersection_params, rot90, side_distance,
                                              signed_angle, unit)
from patchfold.calculations.layout import Layout, base_layout
from patchfold.calculations.prismatoid_model import Prismatoid, at_height, obtuse_faces, surface_faces
from patchfold.config.tolerances import load_tolerances
from patchfold.errors import InvalidInput, ObtuseFace, RayCrossing

logger = logging.getLogger(__name__)

ALTITUDE = 'altitude'
DIAMOND = 'diamond'
V_WEDGE = 'v_wedge'


# =============================================================================
# TYPES
# =============================================================================

@dataclass(frozen=True, eq=False)
class BaseUnfolding:
    base: np.ndarray                 # (m, 2) base polygon
    triangles: Dict[int, np.ndarray]  # base edge i -> (b_i, b_{i+1}, a') in the plane
    apex_vertex: Dict[int, int]      # base edge i -> vertex id of its apex
    layout: Layout

    @property
    def apexes(self) -> np.ndarray:
        return np.array([self.triangles[i][2] for i in range(len(self.base))])


@dataclass(frozen=True, eq=False)
class Region:
    kind: str
    vertex: int                      # base vertex the region belongs to
    chain: np.ndarray                # (k, 2) finite boundary chain
    head: Optional[np.ndarray] = None  # ray direction leaving chain[0]
    tail: Optional[np.ndarray] = None  # ray direction leaving chain[-1]

    @property
    def bounded(self) -> bool:
        return self.head is None

    def segments(self) -> List[tuple]:
        c = self.chain
        segs = [(c[i], c[i + 1]) for i in range(len(c) - 1)]
        if self.bounded and len(c) > 2:
            segs.append((c[-1], c[0]))
        return segs

    def rays(self) -> List[Ray2]:
        if self.bounded:
            return []
        return [Ray2(self.chain[0], self.head), Ray2(self.chain[-1], self.tail)]

    def contains(self, p, eps: float) -> bool:
        return region_contains(self, p, eps)

    def contains_polygon(self, poly, eps: float) -> bool:
        return polygon_in_region(poly, self, eps)

    def to_dict(self) -> Dict:
        return {
            'kind': self.kind,
            'vertex': self.vertex,
            'chain': self.chain.tolist(),
            'head': None if self.head is None else self.head.tolist(),
            'tail': None if self.tail is None else self.tail.tolist(),
        }


@dataclass(frozen=True, eq=False)
class AltitudePartition:
    unfolding: BaseUnfolding
    rays: List[Ray2]                 # base edge i -> ray from its unfolded apex
    regions: List[Region]            # base vertex i -> R_i

    def to_dict(self) -> Dict:
        return {
            'rays': [{'origin': r.origin.tolist(), 'direction': r.direction.tolist()} for r in self.rays],
            'regions': [r.to_dict() for r in self.regions],
        }


# =============================================================================
# MEMBERSHIP
# =============================================================================

def region_contains(R: Region, p, eps: float) -> bool:
    """
    Closed membership test by winding angle

    For an unbounded region the boundary is closed at infinity by the arc
    from the tail direction back to the head direction.
    """
    p = np.asarray(p, dtype=float)
    c = R.chain
    winding_tol = load_tolerances()['winding']
    for i in range(len(c) - 1):
        if point_segment_distance(p, c[i], c[i + 1]) <= eps:
            return True
    if R.bounded:
        if point_segment_distance(p, c[-1], c[0]) <= eps:
            return True
        total = sum(signed_angle(c[i] - p, c[(i + 1) % len(c)] - p) for i in range(len(c)))
        return abs(abs(total) - 2 * math.pi) < winding_tol

    if point_ray_distance(p, c[0], R.head) <= eps or point_ray_distance(p, c[-1], R.tail) <= eps:
        return True
    total = signed_angle(R.head, c[0] - p)
    for i in range(len(c) - 1):
        total += signed_angle(c[i] - p, c[i + 1] - p)
    total += signed_angle(c[-1] - p, R.tail)
    delta = signed_angle(R.head, R.tail)
    if delta < 0:
        delta += 2 * math.pi
    return abs(total - delta + 2 * math.pi) < winding_tol


def _strictly_opposite(s1: float, s2: float, tol: float) -> bool:
    return (s1 > tol and s2 < -tol) or (s1 < -tol and s2 > tol)


def segment_crosses_segment(a, b, c, d, tol: float) -> bool:
    """Proper crossing with distance-normalized side tests."""
    return (_strictly_opposite(side_distance(a, b, c), side_distance(a, b, d), tol)
            and _strictly_opposite(side_distance(c, d, a), side_distance(c, d, b), tol))


def segment_crosses_ray(a, b, origin, direction, tol: float) -> bool:
    d = unit(np.asarray(direction, dtype=float))
    o = np.asarray(origin, dtype=float)
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    sa, sb = cross2(d, a - o), cross2(d, b - o)
    if not _strictly_opposite(sa, sb, tol):
        return False
    x = a + (sa / (sa - sb)) * (b - a)
    return float(np.dot(x - o, d)) > tol


def polygon_in_region(poly, R: Region, eps: float) -> bool:
    """All vertices inside and no edge properly crossing the region boundary."""
    poly = np.asarray(poly, dtype=float)
    if not all(region_contains(R, p, eps) for p in poly):
        return False
    edges = [(poly[i], poly[(i + 1) % len(poly)]) for i in range(len(poly))]
    for a, b in edges:
        for s, t in R.segments():
            if segment_crosses_segment(a, b, s, t, eps):
                return False
        for ray in R.rays():
            if segment_crosses_ray(a, b, ray.origin, ray.direction, eps):
                return False
    return True


# =============================================================================
# BASE UNFOLDING / PARTITION
# =============================================================================

def base_unfolding(P: Prismatoid) -> BaseUnfolding:
    """Every B-triangle rotated about its base edge into the base plane, outside B."""
    L = base_layout(P, surface_faces(P))
    triangles, apex_vertex = {}, {}
    for i, k in enumerate(P.structure.b_face):
        triangles[i] = L[k].polygon
        apex_vertex[i] = P.faces[k].opposite
    return BaseUnfolding(base=P.B.copy(), triangles=triangles, apex_vertex=apex_vertex, layout=L)


def altitude_partition(P: Prismatoid, check: bool = True) -> AltitudePartition:
    """
    Altitude rays and regions of the base unfolding

    Ray r_i starts at the unfolded apex of B'_i and runs along the outward
    normal of base edge i (the altitude direction). Region R_i at base vertex
    b_i is bounded by r_{i-1}, the edges a'_{i-1} b_i and b_i a'_i, and r_i.

    Raises:
        RayCrossing: two rays cross (check=True)
    """
    bu = base_unfolding(P)
    m = P.m
    apex = bu.apexes
    normals = [outward_normal(P.B[i], P.B[(i + 1) % m]) for i in range(m)]
    rays = [Ray2(apex[i], normals[i]) for i in range(m)]
    regions = [Region(ALTITUDE, i, np.array([apex[i - 1], P.B[i], apex[i]]),
                      head=normals[i - 1], tail=normals[i]) for i in range(m)]
    partition = AltitudePartition(unfolding=bu, rays=rays, regions=regions)
    if check:
        crossings = crossing_rays(partition, P.tolerance.eps_len)
        if crossings:
            raise RayCrossing(f"Altitude rays {crossings[0]} cross",
                              details={'pairs': crossings, 'prismatoid': P.to_dict()})
    return partition


def crossing_rays(partition: AltitudePartition, eps: float) -> List[tuple]:
    """Pairs (i, j) of altitude rays that meet at positive parameters on both."""
    out = []
    rays = partition.rays
    for i in range(len(rays)):
        for j in range(i + 1, len(rays)):
            params = ray_intersection_params(rays[i].origin, rays[i].direction, rays[j].origin, rays[j].direction)
            if params is not None and params[0] > eps and params[1] > eps:
                out.append((i, j))
    return out


def apex_track(P: Prismatoid, i: int, z_list) -> np.ndarray:
    """
    Unfolded apex of B-triangle i at each height in z_list

    Returns:
        (len(z_list), 2) positions; they lie on the altitude line of base
        edge i and move outward as z grows
    """
    if not 0 <= i < P.m:
        raise InvalidInput(f"B-triangle index {i} out of range")
    return np.array([base_unfolding(at_height(P, float(z))).triangles[i][2] for z in z_list])


# =============================================================================
# NONOBTUSE REGIONS
# =============================================================================

def _require_nonobtuse(P: Prismatoid, include_top: bool = False) -> None:
    bad = obtuse_faces(P, include_top=include_top)
    if bad:
        raise ObtuseFace(f"Faces {bad} are obtuse" + (" or the top is not a nonobtuse triangle" if 'top' in bad else ''))


def diamond(P: Prismatoid, i: int, bu: Optional[BaseUnfolding] = None) -> Region:
    """
    Diamond D_i at base vertex b_i

    Bounded by the edges a'_{i-1} b_i, b_i a'_i and the perpendiculars to
    them at the unfolded apexes. When the perpendiculars meet beyond the
    apexes the diamond is the kite they close off, otherwise it is unbounded.
    """
    _require_nonobtuse(P)
    bu = bu or base_unfolding(P)
    m = P.m
    b = P.B[i]
    aL, aR = bu.triangles[(i - 1) % m][2], bu.triangles[i][2]
    wL = unit(rot90(aL - b, 1))
    wR = unit(rot90(aR - b, -1))
    params = ray_intersection_params(aL, wL, aR, wR)
    if params is not None and params[0] > 0 and params[1] > 0:
        tip = aL + params[0] * wL
        return Region(DIAMOND, i, np.array([aL, b, aR, tip]))
    return Region(DIAMOND, i, np.array([aL, b, aR]), head=wL, tail=wR)


def v_wedge(P: Prismatoid, i: int, bu: Optional[BaseUnfolding] = None) -> Region:
    """Wedge at b_i between the rays through the unfolded apexes a'_{i-1} and a'_i."""
    if P.m != 3 or P.n != 3:
        raise InvalidInput("V-wedges are defined for triangular prismatoids only")
    _require_nonobtuse(P, include_top=True)
    bu = bu or base_unfolding(P)
    b = P.B[i]
    aL, aR = bu.triangles[(i - 1) % P.m][2], bu.triangles[i][2]
    return Region(V_WEDGE, i, np.array([b]), head=unit(aL - b), tail=unit(aR - b))


def sample_region(R: Region, reach: float) -> np.ndarray:
    """Finite chain points plus points far out along the end rays."""
    if R.bounded:
        return R.chain.copy()
    return np.vstack([R.chain, R.chain[0] + reach * R.head, R.chain[-1] + reach * R.tail])


def region_inside(inner: Region, outer: Region, eps: float, reach: float) -> bool:
    """Sampled containment test: chain points and far ray points of inner lie in outer."""
    return all(region_contains(outer, p, eps) for p in sample_region(inner, reach))
