"""
Prismatoid Model
Builds the convex hull of a top polygon A (height z) over a base polygon B
(height 0) and derives its triangulated lateral faces.

Vertex ids: B vertices are 0..m-1, A vertices m..m+n-1. Lateral faces are
ordered by the angle of their outward planar normal, starting with the
B-triangle of base edge 0, so consecutive faces share a lateral edge and
the order is the same for every z > 0.

    B-triangle on base edge i:  (b_i, b_{i+1}, a)   a maximizes n_i . a
    A-triangle on top edge j:   (a_{j+1}, a_j, b)   b maximizes n_j . b

Each face is classified UP or DOWN by the sign of the vertical component of
its outward normal. That sign does not depend on z, so the flat prismatoid
(z = 0) keeps the labels of any small positive height.
"""
import math
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.spatial.distance import pdist

from patchfold.config.tolerances import load_tolerances
from patchfold.calculations.geom_core import (Tolerance, as_polygon, cross2, orient2d,
                                              outward_normal, unit)
from patchfold.errors import (ExactlyHorizontalNormal, HullCheckFailed, InvalidInput,
                              NonConvexInput, NonFiniteInput, QuadLateralFace)

logger = logging.getLogger(__name__)

UP = 'UP'
DOWN = 'DOWN'


# =============================================================================
# TYPES
# =============================================================================

@dataclass(frozen=True)
class LateralFace:
    kind: str                      # 'A' or 'B'
    vertices: Tuple[int, int, int]
    edge: int                      # index of the B-edge (kind B) or A-edge (kind A)
    opposite: int                  # vertex id of the apex opposite that edge
    normal_angle: float            # angle of the outward planar normal, radians
    orientation: str = UP          # UP or DOWN


@dataclass(frozen=True)
class HullStructure:
    faces: Tuple[LateralFace, ...]
    b_face: Tuple[int, ...]        # base edge i -> index of its B-triangle
    a_face: Tuple[int, ...]        # top edge j -> index of its A-triangle
    fans: Tuple[Tuple[int, ...], ...]  # base vertex i -> A-triangle indices, left to right

    def signature(self) -> Tuple:
        """Combinatorial identity of the hull (face kinds and vertex triples)."""
        return tuple((f.kind, f.vertices) for f in self.faces)


@dataclass(frozen=True, eq=False)
class Prismatoid:
    A: np.ndarray
    B: np.ndarray
    z: float
    structure: HullStructure
    tolerance: Tolerance
    diameter: float
    _vertices: np.ndarray = field(repr=False, default=None)

    @property
    def m(self) -> int:
        return len(self.B)

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def faces(self) -> Tuple[LateralFace, ...]:
        return self.structure.faces

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(f.orientation for f in self.structure.faces)

    @property
    def vertices(self) -> np.ndarray:
        return self._vertices

    @property
    def top_vertices(self) -> Tuple[int, ...]:
        return tuple(range(self.m, self.m + self.n))

    @property
    def base_vertices(self) -> Tuple[int, ...]:
        return tuple(range(self.m))

    def face_points(self, k: int) -> np.ndarray:
        return self._vertices[list(self.faces[k].vertices)]

    def planar(self, vid: int) -> np.ndarray:
        return self._vertices[vid, :2]

    def to_dict(self) -> Dict:
        return {'A': self.A.tolist(), 'B': self.B.tolist(), 'z': float(self.z)}


# =============================================================================
# VALIDATION
# =============================================================================

def check_convex_polygon(poly: np.ndarray, name: str, eps: float) -> None:
    """Strictly convex, ccw, simple (total turning exactly one turn)."""
    k = len(poly)
    if k < 3:
        raise InvalidInput(f"Polygon {name} needs at least 3 vertices, got {k}")
    turning = 0.0
    for i in range(k):
        p, q, r = poly[i - 1], poly[i], poly[(i + 1) % k]
        if orient2d(p, q, r, eps) <= 0:
            raise NonConvexInput(f"Polygon {name} is not strictly convex and ccw at vertex {i}")
        turning += math.atan2(cross2(q - p, r - q), float(np.dot(q - p, r - q)))
    if abs(turning - 2 * math.pi) > 1e-6:
        raise NonConvexInput(f"Polygon {name} winds {turning / (2 * math.pi):.3f} times")


def _support_argmax(normal: np.ndarray, pts: np.ndarray, eps: float, what: str) -> int:
    proj = pts @ normal
    order = np.argsort(-proj, kind='stable')
    if len(pts) > 1 and proj[order[0]] - proj[order[1]] <= eps:
        raise QuadLateralFace(f"{what} is parallel to an edge of the other polygon "
                              f"(support gap {proj[order[0]] - proj[order[1]]:.3g})")
    return int(order[0])


# =============================================================================
# CONSTRUCTION
# =============================================================================

def lateral_structure(A: np.ndarray, B: np.ndarray, tol: Tolerance) -> HullStructure:
    """
    Merge the edge normals of A and B into the cyclic lateral face list

    Args:
        A: (n, 2) top polygon, ccw
        B: (m, 2) base polygon, ccw
        tol: tolerance for parallel-edge detection

    Returns:
        HullStructure with faces in outward-normal order
    """
    m, n = len(B), len(A)
    events = []
    for i in range(m):
        nrm = outward_normal(B[i], B[(i + 1) % m])
        apex = _support_argmax(nrm, A, tol.eps_len, f"B edge {i}")
        events.append(('B', i, m + apex, math.atan2(nrm[1], nrm[0])))
    for j in range(n):
        nrm = outward_normal(A[j], A[(j + 1) % n])
        foot = _support_argmax(nrm, B, tol.eps_len, f"A edge {j}")
        events.append(('A', j, foot, math.atan2(nrm[1], nrm[0])))

    start = events[0][3]
    events.sort(key=lambda ev: (ev[3] - start) % (2 * math.pi))

    two_pi = 2 * math.pi
    for k in range(len(events)):
        gap = (events[(k + 1) % len(events)][3] - events[k][3]) % two_pi
        if min(gap, two_pi - gap) <= tol.eps_ang:
            raise QuadLateralFace(f"Edges {events[k][:2]} and {events[(k + 1) % len(events)][:2]} are parallel")

    faces = []
    for kind, edge, opp, ang in events:
        if kind == 'B':
            verts = (edge, (edge + 1) % m, opp)
        else:
            verts = (m + (edge + 1) % n, m + edge, opp)
        faces.append(LateralFace(kind=kind, vertices=verts, edge=edge, opposite=opp, normal_angle=ang))

    b_face = [0] * m
    a_face = [0] * n
    for k, f in enumerate(faces):
        if f.kind == 'B':
            b_face[f.edge] = k
        else:
            a_face[f.edge] = k

    K = len(faces)
    fans = []
    for i in range(m):
        left, right = b_face[(i - 1) % m], b_face[i]
        members = []
        k = (left + 1) % K
        while k != right:
            members.append(k)
            k = (k + 1) % K
        fans.append(tuple(members))
    return HullStructure(faces=tuple(faces), b_face=tuple(b_face), a_face=tuple(a_face), fans=tuple(fans))


def _label_faces(structure: HullStructure, A: np.ndarray, B: np.ndarray, tol: Tolerance) -> HullStructure:
    planar = np.vstack([B, A])
    labelled = []
    for f in structure.faces:
        p, q, r = (planar[v] for v in f.vertices)
        # vertical component of (q - p) x (r - p) only sees the footprint
        nz = cross2(q - p, r - p)
        edge_len = float(np.linalg.norm(q - p))
        if abs(nz) <= tol.eps_len * edge_len:
            raise ExactlyHorizontalNormal(f"{f.kind}-triangle on edge {f.edge} is vertical")
        labelled.append(LateralFace(f.kind, f.vertices, f.edge, f.opposite, f.normal_angle,
                                    UP if nz > 0 else DOWN))
    return HullStructure(faces=tuple(labelled), b_face=structure.b_face, a_face=structure.a_face, fans=structure.fans)


def build_prismatoid(A, B, z: float, tol: Optional[Tolerance] = None,
                     check_support: bool = True) -> Prismatoid:
    """
    Build a prismatoid and its lateral triangulation

    Args:
        A: top polygon (list of [x, y], ccw), placed at height z
        B: base polygon (list of [x, y], ccw), placed at height 0
        z: height, z >= 0 (z = 0 is the flat prismatoid)
        tol: tolerance; defaults to 1e-9 x diameter
        check_support: verify every lateral plane supports all vertices (z > 0)

    Returns:
        Prismatoid with labelled HullStructure
    """
    A = as_polygon(A, 2)
    B = as_polygon(B, 2)
    try:
        z = float(z)
    except (TypeError, ValueError):
        raise InvalidInput(f"Height must be a number, got {z!r}")
    if not math.isfinite(z):
        raise NonFiniteInput(f"Height is not finite: {z}")
    if z < 0:
        raise InvalidInput(f"Height must be >= 0, got {z}")

    vertices = np.vstack([np.column_stack([B, np.zeros(len(B))]),
                          np.column_stack([A, np.full(len(A), z)])])
    diam = float(pdist(vertices).max())
    if diam == 0:
        raise InvalidInput("Prismatoid collapses to a point")
    tol = tol or Tolerance.for_diameter(diam)

    check_convex_polygon(B, 'B', tol.eps_len)
    check_convex_polygon(A, 'A', tol.eps_len)

    structure = _label_faces(lateral_structure(A, B, tol), A, B, tol)
    P = Prismatoid(A=A, B=B, z=z, structure=structure, tolerance=tol, diameter=diam, _vertices=vertices)
    if check_support and z > 0:
        check_supporting_planes(P)
    logger.debug(f"Built prismatoid m={P.m} n={P.n} z={z:.6g}: {''.join(f.kind for f in P.faces)}")
    return P


def check_supporting_planes(P: Prismatoid) -> float:
    """
    Every lateral plane must have all vertices on or behind it

    Returns:
        Largest signed excess found (<= tolerance)
    """
    settings = load_tolerances()
    limit = max(settings['support_rel'] * P.diameter, P.tolerance.eps_len)
    V = P.vertices
    worst = -np.inf
    for k, f in enumerate(P.faces):
        p, q, r = V[list(f.vertices)]
        n = unit(np.cross(q - p, r - p))
        excess = float(((V - p) @ n).max())
        worst = max(worst, excess)
        if excess > limit:
            raise HullCheckFailed(f"Lateral face {k} does not support the vertex set (excess {excess:.3g})",
                                  details={'face': k, 'excess': excess, 'prismatoid': P.to_dict()})
    return worst


def at_height(P: Prismatoid, z: float) -> Prismatoid:
    """Same footprints, new height; the face list is unchanged for every z >= 0."""
    if z == P.z:
        return P
    return build_prismatoid(P.A, P.B, z)


def classify_up_down(P: Prismatoid) -> Tuple[str, ...]:
    """
    Up/down label of each lateral face

    Computed from the outward normal at the prismatoid's own height, or at
    z_ref = diameter / 100 for the flat prismatoid. The label is z-invariant.
    """
    z_eval = P.z if P.z > 0 else P.diameter / 100.0
    V = P.vertices.copy()
    V[P.m:, 2] = z_eval
    labels = []
    for f in P.faces:
        p, q, r = V[list(f.vertices)]
        nz = float(np.cross(q - p, r - p)[2])
        if abs(nz) <= P.tolerance.eps_len * float(np.linalg.norm(q - p)):
            raise ExactlyHorizontalNormal(f"{f.kind}-triangle on edge {f.edge} is vertical")
        labels.append(UP if nz > 0 else DOWN)
    return tuple(labels)


# =============================================================================
# FAN GEOMETRY
# =============================================================================

def fan_chain(P: Prismatoid, b: int) -> List[int]:
    """Vertex ids c_0..c_k of the a-chain at base vertex b (left apex to right apex)."""
    st = P.structure
    chain = [P.faces[st.b_face[(b - 1) % P.m]].opposite]
    for k in st.fans[b]:
        chain.append(P.faces[k].vertices[0])
    return chain


def lateral_edge_lengths(P: Prismatoid, b: int) -> np.ndarray:
    """
    Lengths |b a(z)| of the lateral edges from base vertex b, in a-chain order

    Args:
        P: prismatoid
        b: base vertex index

    Returns:
        Array of k + 1 lengths
    """
    if not 0 <= b < P.m:
        raise InvalidInput(f"Base vertex {b} out of range 0..{P.m - 1}")
    V = P.vertices
    return np.array([float(np.linalg.norm(V[c] - V[b])) for c in fan_chain(P, b)])


# =============================================================================
# DERIVED PRISMATOIDS
# =============================================================================

def swap_roles(P: Prismatoid) -> Prismatoid:
    """
    Turn the prismatoid upside down

    The mirror y -> -y keeps both polygons ccw after reversal; the old top
    becomes the base.
    """
    mirror = np.array([1.0, -1.0])
    new_A = (P.B * mirror)[::-1]
    new_B = (P.A * mirror)[::-1]
    return build_prismatoid(new_A, new_B, P.z)


def rotate_polygon(poly, angle: float, center=None) -> np.ndarray:
    """Rotate a planar polygon about its vertex centroid (or center) by angle radians."""
    poly = as_polygon(poly, 2)
    c = poly.mean(axis=0) if center is None else np.asarray(center, dtype=float)
    cs, sn = math.cos(angle), math.sin(angle)
    R = np.array([[cs, -sn], [sn, cs]])
    return (poly - c) @ R.T + c


def is_nonobtuse_triangle(pts, eps_ang: float) -> bool:
    pts = np.asarray(pts, dtype=float)
    for i in range(3):
        a, u, v = pts[i], pts[(i + 1) % 3], pts[(i + 2) % 3]
        cos = float(np.dot(u - a, v - a)) / (float(np.linalg.norm(u - a)) * float(np.linalg.norm(v - a)))
        if math.acos(max(-1.0, min(1.0, cos))) > math.pi / 2 + eps_ang:
            return False
    return True


def obtuse_faces(P: Prismatoid, include_top: bool = False) -> List:
    """Ids of lateral faces (and 'top') that have an angle above pi/2."""
    bad = [k for k in range(len(P.faces))
           if not is_nonobtuse_triangle(P.face_points(k), P.tolerance.eps_ang)]
    if include_top and (P.n != 3 or not is_nonobtuse_triangle(P.A, P.tolerance.eps_ang)):
        bad.append('top')
    return bad


def surface_faces(P: Prismatoid) -> Tuple[Tuple[int, ...], ...]:
    """
    Full face list of the prismatoid surface

    Lateral faces keep indices 0..K-1, the base (reversed, so ccw from
    below) is K and the top is K + 1.
    """
    faces = [f.vertices for f in P.faces]
    faces.append(tuple(reversed(P.base_vertices)))
    faces.append(P.top_vertices)
    return tuple(faces)
