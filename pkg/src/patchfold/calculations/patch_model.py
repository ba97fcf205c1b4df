"""
Patch Model
Convex polyhedra, convex patches (disk-like face subsets) and the
edge/vertex neighborhoods of a face.
"""
import math
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from scipy.spatial import ConvexHull
from scipy.spatial.distance import pdist

from patchfold.config.tolerances import load_tolerances
from patchfold.calculations.geom_core import angle_at, face_normal, planarity_residual
from patchfold.calculations.prismatoid_model import surface_faces
from patchfold.errors import DegenerateHull, InvalidInput, NonPlanarFace, NotADisk

logger = logging.getLogger(__name__)

EDGE_NEIGHBORHOOD = 'edge'
VERTEX_NEIGHBORHOOD = 'vertex'


def edge_key(u: int, v: int) -> FrozenSet[int]:
    return frozenset((u, v))


def face_edges(face: Sequence[int]) -> List[Tuple[int, int]]:
    return [(face[i], face[(i + 1) % len(face)]) for i in range(len(face))]


# =============================================================================
# TYPES
# =============================================================================

@dataclass(frozen=True, eq=False)
class ConvexPolyhedron:
    vertices: np.ndarray
    faces: Tuple[Tuple[int, ...], ...]
    names: Optional[Tuple[str, ...]] = None
    support_tol: Optional[float] = None   # absolute slack the face list was validated with

    @property
    def diameter(self) -> float:
        used = sorted({v for f in self.faces for v in f})
        return float(pdist(self.vertices[used]).max())

    def face_points(self, k: int) -> np.ndarray:
        return self.vertices[list(self.faces[k])]

    def unit_normal(self, k: int) -> np.ndarray:
        n = face_normal(self.face_points(k))
        return n / np.linalg.norm(n)

    def edge_faces(self) -> Dict[FrozenSet[int], List[int]]:
        table: Dict[FrozenSet[int], List[int]] = {}
        for k, f in enumerate(self.faces):
            for u, v in face_edges(f):
                table.setdefault(edge_key(u, v), []).append(k)
        return table

    def vertex_id(self, name: str) -> int:
        if self.names is None or name not in self.names:
            raise InvalidInput(f"Unknown vertex name '{name}'")
        return self.names.index(name)

    def to_dict(self) -> Dict:
        out = {'vertices': self.vertices.tolist(), 'faces': [list(f) for f in self.faces]}
        if self.names is not None:
            out['names'] = list(self.names)
        if self.support_tol is not None:
            out['support_tol'] = self.support_tol
        return out


@dataclass(frozen=True, eq=False)
class ConvexPatch:
    parent: ConvexPolyhedron
    faces: Tuple[int, ...]
    base: int
    adjacency: nx.Graph = field(repr=False)
    boundary: Tuple[int, ...]          # boundary vertex cycle

    @property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(sorted({v for k in self.faces for v in self.parent.faces[k]}))

    @property
    def interior_vertices(self) -> Tuple[int, ...]:
        on_boundary = set(self.boundary)
        return tuple(v for v in self.vertices if v not in on_boundary)

    def edge_faces(self) -> Dict[FrozenSet[int], List[int]]:
        table: Dict[FrozenSet[int], List[int]] = {}
        for k in self.faces:
            for u, v in face_edges(self.parent.faces[k]):
                table.setdefault(edge_key(u, v), []).append(k)
        return table

    def interior_edges(self) -> List[Tuple[int, int]]:
        return sorted(tuple(sorted(e)) for e, fs in self.edge_faces().items() if len(fs) == 2)

    def to_dict(self, kind: Optional[str] = None) -> Dict:
        out = {'polyhedron': self.parent.to_dict(), 'base_face': self.base, 'faces': list(self.faces)}
        if kind:
            out['kind'] = kind
        return out


# =============================================================================
# HULLS
# =============================================================================

def convex_hull3(points, merge_dihedral: Optional[float] = None,
                 names: Optional[Sequence[str]] = None) -> ConvexPolyhedron:
    """
    Convex hull with coplanar facets merged

    Qhull returns triangles; neighbours whose normals differ by less than
    merge_dihedral are unioned into one convex face with vertices ordered ccw
    seen from outside. Vertex indices refer to the input points.

    Args:
        points: (N, 3) points, N >= 4
        merge_dihedral: merge threshold in radians (default 1e-7)
        names: optional vertex names carried to the result

    Returns:
        ConvexPolyhedron
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) < 4:
        raise DegenerateHull(f"Need at least 4 points in 3D, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise InvalidInput("Non-finite hull input")
    centred = pts - pts.mean(axis=0)
    sv = np.linalg.svd(centred, compute_uv=False)
    if sv[2] <= 1e-12 * max(sv[0], 1.0):
        raise DegenerateHull("All points are coplanar")
    if merge_dihedral is None:
        merge_dihedral = load_tolerances()['merge_dihedral']

    hull = ConvexHull(pts)
    normals = hull.equations[:, :3]
    parent = list(range(len(hull.simplices)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s, nbrs in enumerate(hull.neighbors):
        for t in nbrs:
            dihedral = math.atan2(float(np.linalg.norm(np.cross(normals[s], normals[t]))),
                                  float(np.dot(normals[s], normals[t])))
            if dihedral < merge_dihedral:
                parent[find(s)] = find(t)

    groups: Dict[int, List[int]] = {}
    for s in range(len(hull.simplices)):
        groups.setdefault(find(s), []).append(s)
    if any(len(g) > 1 for g in groups.values()):
        logger.debug(f"Merged {len(hull.simplices)} hull triangles into {len(groups)} faces")

    faces = []
    for members in sorted(groups.values(), key=min):
        vids = sorted({int(v) for s in members for v in hull.simplices[s]})
        n = normals[members].mean(axis=0)
        faces.append(_ccw_about(pts, vids, n / np.linalg.norm(n)))
    return ConvexPolyhedron(vertices=pts, faces=tuple(faces), names=tuple(names) if names else None)


def _ccw_about(pts: np.ndarray, vids: List[int], normal: np.ndarray) -> Tuple[int, ...]:
    c = pts[vids].mean(axis=0)
    helper = np.array([1.0, 0.0, 0.0]) if abs(normal[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = np.cross(normal, helper)
    u /= np.linalg.norm(u)
    w = np.cross(normal, u)
    angles = [math.atan2(float((pts[v] - c) @ w), float((pts[v] - c) @ u)) for v in vids]
    order = np.argsort(angles, kind='stable')
    return tuple(vids[k] for k in order)


def polyhedron_from_faces(vertices, faces: Iterable[Sequence[int]], names: Optional[Sequence[str]] = None,
                          support_tol: Optional[float] = None) -> ConvexPolyhedron:
    """
    Polyhedron from an explicit face list, oriented outward and validated

    Faces are reoriented so their normal points away from the vertex
    centroid; each face must be planar and support the vertex set within
    support_tol (default 1e-9 x diameter).
    """
    V = np.asarray(vertices, dtype=float)
    centroid = V.mean(axis=0)
    diam = float(pdist(V).max())
    limit = support_tol if support_tol is not None else load_tolerances()['support_rel'] * diam
    oriented = []
    for k, f in enumerate(faces):
        f = tuple(int(v) for v in f)
        pts = V[list(f)]
        if planarity_residual(pts) > limit:
            raise NonPlanarFace(f"Face {k} {f} is not planar (residual {planarity_residual(pts):.3g})")
        n = face_normal(pts)
        if float(n @ (pts.mean(axis=0) - centroid)) < 0:
            f = tuple(reversed(f))
            n = -n
        n = n / np.linalg.norm(n)
        excess = float(((V - pts[0]) @ n).max())
        if excess > limit:
            raise InvalidInput(f"Face {k} {f} does not support the vertex set (excess {excess:.3g})")
        oriented.append(f)
    poly = ConvexPolyhedron(vertices=V, faces=tuple(oriented), names=tuple(names) if names else None,
                            support_tol=support_tol)
    table = poly.edge_faces()
    bad = [tuple(e) for e, fs in table.items() if len(fs) != 2]
    if bad:
        raise InvalidInput(f"Face list is not a closed surface; edges {bad[:4]} have != 2 faces")
    return poly


def prismatoid_polyhedron(P) -> Tuple[ConvexPolyhedron, int]:
    """
    A prismatoid (z > 0) as a polyhedron

    Face ids: lateral faces keep their indices 0..K-1, the base is K and the
    top K+1. The base is listed reversed so it is ccw seen from below.

    Returns:
        (polyhedron, base face id)
    """
    if P.z <= 0:
        raise DegenerateHull("A flat prismatoid is not a polyhedron")
    return ConvexPolyhedron(vertices=P.vertices.copy(), faces=surface_faces(P)), len(P.faces)


# =============================================================================
# PATCHES
# =============================================================================

def patch_from_faces(poly: ConvexPolyhedron, faces: Iterable[int], base: int) -> ConvexPatch:
    """
    Build and validate a convex patch

    Raises:
        NotADisk: disconnected, closed, or not homeomorphic to a disk
    """
    subset = tuple(sorted(set(int(k) for k in faces)))
    if base not in subset:
        raise InvalidInput(f"Base face {base} is not part of the patch")

    adjacency = nx.Graph()
    adjacency.add_nodes_from(subset)
    edge_table: Dict[FrozenSet[int], List[int]] = {}
    for k in subset:
        for u, v in face_edges(poly.faces[k]):
            edge_table.setdefault(edge_key(u, v), []).append(k)
    for e, fs in edge_table.items():
        if len(fs) > 2:
            raise NotADisk(f"Edge {tuple(e)} is shared by {len(fs)} faces")
        if len(fs) == 2:
            adjacency.add_edge(fs[0], fs[1], hinge=tuple(sorted(e)))
    if not nx.is_connected(adjacency):
        raise NotADisk(f"Patch splits into {nx.number_connected_components(adjacency)} components")

    n_vertices = len({v for k in subset for v in poly.faces[k]})
    euler = n_vertices - len(edge_table) + len(subset)
    if euler != 1:
        raise NotADisk(f"Patch has Euler characteristic {euler}, expected 1")

    # directed boundary edges as they run in their (outward ccw) face
    successor: Dict[int, int] = {}
    for k in subset:
        for u, v in face_edges(poly.faces[k]):
            if len(edge_table[edge_key(u, v)]) == 1:
                if u in successor:
                    raise NotADisk(f"Boundary is pinched at vertex {u}")
                successor[u] = v
    start = min(successor)
    cycle = [start]
    while successor[cycle[-1]] != start:
        cycle.append(successor[cycle[-1]])
        if len(cycle) > len(successor):
            raise NotADisk("Boundary does not close")
    if len(cycle) != len(successor):
        raise NotADisk("Boundary has more than one component")

    return ConvexPatch(parent=poly, faces=subset, base=base, adjacency=adjacency, boundary=tuple(cycle))


def neighborhood(poly: ConvexPolyhedron, face: int, kind: str = VERTEX_NEIGHBORHOOD) -> ConvexPatch:
    """
    Face plus every face sharing an edge (kind 'edge') or a vertex (kind 'vertex') with it

    Args:
        poly: convex polyhedron
        face: base face index
        kind: EDGE_NEIGHBORHOOD or VERTEX_NEIGHBORHOOD

    Returns:
        ConvexPatch with the given face as base
    """
    if not 0 <= face < len(poly.faces):
        raise InvalidInput(f"Face {face} out of range")
    base = poly.faces[face]
    if kind == EDGE_NEIGHBORHOOD:
        base_edges = {edge_key(u, v) for u, v in face_edges(base)}
        members = [k for k, f in enumerate(poly.faces)
                   if k == face or any(edge_key(u, v) in base_edges for u, v in face_edges(f))]
    elif kind == VERTEX_NEIGHBORHOOD:
        base_vertices = set(base)
        members = [k for k, f in enumerate(poly.faces) if k == face or base_vertices.intersection(f)]
    else:
        raise InvalidInput(f"Unknown neighborhood kind '{kind}'")
    return patch_from_faces(poly, members, face)


# =============================================================================
# CURVATURE
# =============================================================================

def vertex_curvature(poly: ConvexPolyhedron, v: int, faces: Optional[Iterable[int]] = None) -> float:
    """2 pi minus the face angles at v (over the given faces, default all)."""
    total = 0.0
    V = poly.vertices
    for k in (range(len(poly.faces)) if faces is None else faces):
        f = poly.faces[k]
        if v not in f:
            continue
        i = f.index(v)
        total += angle_at(V[v], V[f[(i + 1) % len(f)]], V[f[i - 1]])
    return 2 * math.pi - total


def total_curvature(poly: ConvexPolyhedron) -> float:
    """Sum of vertex curvatures; 4 pi for a closed convex polyhedron."""
    used = sorted({v for f in poly.faces for v in f})
    return sum(vertex_curvature(poly, v) for v in used)
