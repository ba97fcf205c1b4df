"""
Overlap Verifier
Decides whether the placed faces of a layout overlap, reports witness pairs
and points, and measures angle gaps at layout vertices.

Faces are convex, so two faces overlap exactly when no separating axis
leaves a gap; touching along an edge or at a vertex is not an overlap.
"""
import math
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from shapely.geometry import Polygon

from patchfold.calculations.geom_core import Tolerance, polygon_area, side_distance
from patchfold.calculations.layout import Layout
from patchfold.errors import InvalidInput, VertexNotSurrounded

logger = logging.getLogger(__name__)

CROSSING = 'crossing'
CONTAINED_VERTEX = 'contained_vertex'
INTERIOR_POINT = 'interior_point'


# =============================================================================
# TYPES
# =============================================================================

@dataclass
class Witness:
    faces: Tuple[int, int]
    point: np.ndarray
    kind: str

    def to_dict(self) -> Dict:
        return {'faces': list(self.faces), 'point': self.point.tolist(), 'kind': self.kind}


@dataclass
class OverlapReport:
    overlapping: bool
    witnesses: List[Witness] = field(default_factory=list)
    min_clearance: Optional[float] = None   # None when every pair touches or overlaps

    @property
    def pairs(self) -> List[Tuple[int, int]]:
        return [w.faces for w in self.witnesses]

    def involves(self, face_id: int) -> bool:
        return any(face_id in w.faces for w in self.witnesses)

    def to_dict(self) -> Dict:
        return {
            'overlapping': self.overlapping,
            'witnesses': [w.to_dict() for w in self.witnesses],
            'min_clearance': self.min_clearance,
        }


@dataclass
class CurvatureReport:
    vertex: int
    gap: float                       # radians
    faces: List[int] = field(default_factory=list)

    @property
    def degrees(self) -> float:
        return math.degrees(self.gap)

    def to_dict(self) -> Dict:
        return {'vertex': self.vertex, 'gap': self.gap, 'degrees': self.degrees, 'faces': self.faces}


# =============================================================================
# PAIR TESTS
# =============================================================================

def _ccw(poly: np.ndarray) -> np.ndarray:
    return poly if polygon_area(poly) >= 0 else poly[::-1]


def separation(P: np.ndarray, Q: np.ndarray) -> float:
    """
    Largest gap along the edge normals of both polygons

    Positive: separated by that much along some axis. Negative: the smallest
    penetration depth over all axes.
    """
    best = -math.inf
    for poly in (P, Q):
        edges = np.roll(poly, -1, axis=0) - poly
        lengths = np.hypot(edges[:, 0], edges[:, 1])
        for d, l in zip(edges, lengths):
            if l < 1e-300:
                continue
            axis = np.array([-d[1], d[0]]) / l
            p, q = P @ axis, Q @ axis
            gap = max(q.min() - p.max(), p.min() - q.max())
            best = max(best, gap)
    return best


def polygons_overlap(P: np.ndarray, Q: np.ndarray, eps: float) -> bool:
    """Interiors of two convex polygons meet by more than eps along every axis."""
    return separation(P, Q) < -eps


def _strictly_inside(p: np.ndarray, poly: np.ndarray, eps: float) -> bool:
    poly = _ccw(poly)
    return all(side_distance(poly[i], poly[(i + 1) % len(poly)], p) > eps for i in range(len(poly)))


def _edge_crossing(P: np.ndarray, Q: np.ndarray, eps: float) -> Optional[np.ndarray]:
    for i in range(len(P)):
        a, b = P[i], P[(i + 1) % len(P)]
        for j in range(len(Q)):
            c, d = Q[j], Q[(j + 1) % len(Q)]
            s1, s2 = side_distance(a, b, c), side_distance(a, b, d)
            s3, s4 = side_distance(c, d, a), side_distance(c, d, b)
            if ((s1 > eps and s2 < -eps) or (s1 < -eps and s2 > eps)) and \
                    ((s3 > eps and s4 < -eps) or (s3 < -eps and s4 > eps)):
                return a + (s3 / (s3 - s4)) * (b - a)
    return None


def find_witness(P: np.ndarray, Q: np.ndarray, eps: float) -> Tuple[np.ndarray, str]:
    """A vertex strictly inside the other face, else a proper edge crossing, else an interior point."""
    for p in P:
        if _strictly_inside(p, Q, eps):
            return p.copy(), CONTAINED_VERTEX
    for q in Q:
        if _strictly_inside(q, P, eps):
            return q.copy(), CONTAINED_VERTEX
    x = _edge_crossing(P, Q, eps)
    if x is not None:
        return x, CROSSING
    return 0.5 * (P.mean(axis=0) + Q.mean(axis=0)), INTERIOR_POINT


def _min_distance(P: np.ndarray, Q: np.ndarray) -> float:
    def one_way(X, Y):
        best = math.inf
        for p in X:
            for j in range(len(Y)):
                a, b = Y[j], Y[(j + 1) % len(Y)]
                d = b - a
                l2 = float(np.dot(d, d))
                t = 0.0 if l2 == 0 else min(1.0, max(0.0, float(np.dot(p - a, d)) / l2))
                best = min(best, float(np.hypot(*(p - (a + t * d)))))
        return best
    return min(one_way(P, Q), one_way(Q, P))


def _bbox(poly: np.ndarray) -> np.ndarray:
    return np.concatenate([poly.min(axis=0), poly.max(axis=0)])


# =============================================================================
# LAYOUT CHECKS
# =============================================================================

def layout_overlaps(L: Layout, tol: Optional[Tolerance] = None) -> OverlapReport:
    """
    Pairwise overlap test over all placed faces

    Hinge-adjacent faces lie on opposite sides of their shared edge, so the
    same interior test applies to them. Pairs whose bounding boxes are apart
    by more than eps skip the axis test.

    Args:
        L: layout to check
        tol: tolerance; defaults to the layout's own

    Returns:
        OverlapReport with witnesses in face-id order; min_clearance is the
        smallest distance between two faces that do not touch
    """
    eps = (tol or L.tol).eps_len
    ids = sorted(L.faces)
    polys = {k: L[k].polygon for k in ids}
    boxes = {k: _bbox(polys[k]) for k in ids}
    witnesses: List[Witness] = []
    clearance = math.inf
    for i, j in ((ids[x], ids[y]) for x in range(len(ids)) for y in range(x + 1, len(ids))):
        bi, bj = boxes[i], boxes[j]
        box_gap = max(bj[0] - bi[2], bi[0] - bj[2], bj[1] - bi[3], bi[1] - bj[3])
        P, Q = polys[i], polys[j]
        if box_gap > eps:
            clearance = min(clearance, _min_distance(P, Q))
            continue
        sep = separation(P, Q)
        if sep < -eps:
            point, kind = find_witness(P, Q, eps)
            witnesses.append(Witness((i, j), point, kind))
        elif sep > eps:
            clearance = min(clearance, _min_distance(P, Q))
    if witnesses:
        logger.debug(f"{len(witnesses)} overlapping face pairs: {[w.faces for w in witnesses]}")
        return OverlapReport(True, witnesses, None)
    return OverlapReport(False, [], None if clearance == math.inf else clearance)


def cross_check_overlaps(L: Layout, tol: Optional[Tolerance] = None) -> List[Tuple[int, int]]:
    """
    Overlapping pairs decided independently with shapely

    A pair overlaps when the intersection area exceeds eps times the
    perimeter of the smaller face, which ignores shared edges and vertices.
    """
    eps = (tol or L.tol).eps_len
    ids = sorted(L.faces)
    shapes = {k: Polygon(L[k].polygon) for k in ids}
    out = []
    for x in range(len(ids)):
        for y in range(x + 1, len(ids)):
            a, b = shapes[ids[x]], shapes[ids[y]]
            if not a.intersects(b):
                continue
            limit = eps * min(a.length, b.length)
            if a.intersection(b).area > limit:
                out.append((ids[x], ids[y]))
    return out


def angle_gap(L: Layout, v: int, faces: Optional[List[int]] = None) -> CurvatureReport:
    """
    Planar wedge left open at vertex v

    Args:
        L: layout
        v: surface vertex id
        faces: placed faces to sum over; defaults to every placed face at v

    Raises:
        VertexNotSurrounded: the faces around v sit in different layout
            trees, so their angles do not close up around one point
    """
    at_v = L.faces_at(v) if faces is None else list(faces)
    if not at_v:
        raise InvalidInput(f"No placed face is incident to vertex {v}")
    trees = {L.tree_of(k) for k in at_v}
    if len(trees) > 1:
        partial = {}
        for k in at_v:
            root = L.tree_of(k)
            partial[root] = partial.get(root, 0.0) + L.placed_angle_sum(v, [k])
        raise VertexNotSurrounded(f"Faces at vertex {v} lie in {len(trees)} layout trees",
                                  details={'vertex': v, 'partial_sums': partial})
    gap = 2 * math.pi - L.placed_angle_sum(v, at_v)
    return CurvatureReport(vertex=v, gap=gap, faces=sorted(at_v))
