"""
Layout
Planar placement of surface faces: each placed face is either a root or is
developed across a hinge edge from its parent. Uncut edges between two
placed faces that are not hinges form the cut set.
"""
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from patchfold.calculations.geom_core import (Tolerance, angle_at, as_polygon, diameter, face_normal,
                                              side_distance, unfold_face_about_edge, unit)
from patchfold.errors import InvalidInput

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class PlacedFace:
    face_id: int
    vertices: Tuple[int, ...]
    polygon: np.ndarray
    kind: str = 'face'
    parent: Optional[int] = None
    hinge: Optional[Tuple[int, int]] = None

    @property
    def centroid(self) -> np.ndarray:
        return self.polygon.mean(axis=0)

    def image(self, vid: int) -> np.ndarray:
        return self.polygon[self.vertices.index(vid)]


def planar_frame(face3: np.ndarray) -> np.ndarray:
    """Coordinates of a planar spatial polygon in its own plane (first vertex at origin)."""
    p0 = face3[0]
    e = unit(face3[1] - p0)
    n = unit(face_normal(face3))
    w = np.cross(n, e)
    rel = face3 - p0
    return np.column_stack([rel @ e, rel @ w])


class Layout:
    """
    Faces of one surface placed in the plane

    Args:
        vertices: (N, 3) surface vertices, or None for a layout loaded from JSON
        surface_faces: every face of the surface by id (placed or not)
        tol: tolerance used when developing faces
    """

    def __init__(self, vertices: Optional[np.ndarray], surface_faces: Sequence[Sequence[int]],
                 tol: Optional[Tolerance] = None):
        self.vertices = None if vertices is None else np.asarray(vertices, dtype=float)
        self.surface_faces = tuple(tuple(f) for f in surface_faces)
        if tol is None:
            tol = Tolerance.for_diameter(diameter(self.vertices) if self.vertices is not None else 1.0)
        self.tol = tol
        self.faces: Dict[int, PlacedFace] = {}
        self.meta: Dict = {}

    def __len__(self) -> int:
        return len(self.faces)

    def __contains__(self, face_id) -> bool:
        return face_id in self.faces

    def __getitem__(self, face_id) -> PlacedFace:
        return self.faces[face_id]

    def polygons(self) -> Dict[int, np.ndarray]:
        return {k: f.polygon for k, f in self.faces.items()}

    # -------------------------------------------------------------------------
    # placement
    # -------------------------------------------------------------------------

    def place_root(self, face_id: int, polygon=None, vertices: Optional[Sequence[int]] = None,
                   kind: str = 'face') -> PlacedFace:
        vids = tuple(vertices) if vertices is not None else self.surface_faces[face_id]
        if polygon is None:
            polygon = planar_frame(self.vertices[list(vids)])
        placed = PlacedFace(face_id, vids, as_polygon(polygon, 2), kind)
        self.faces[face_id] = placed
        return placed

    def place_child(self, parent_id: int, face_id: int, hinge: Tuple[int, int],
                    kind: str = 'face', vertices: Optional[Sequence[int]] = None) -> PlacedFace:
        """
        Develop a face across a hinge shared with an already placed parent

        The child lands on the opposite side of the hinge from the parent.
        """
        if face_id in self.faces:
            raise InvalidInput(f"Face {face_id} is already placed")
        parent = self.faces[parent_id]
        vids = tuple(vertices) if vertices is not None else self.surface_faces[face_id]
        u, v = hinge
        if u not in vids or v not in vids or u not in parent.vertices or v not in parent.vertices:
            raise InvalidInput(f"Hinge {hinge} is not shared by faces {parent_id} and {face_id}")
        H0, H1 = parent.image(u), parent.image(v)
        side = -1 if side_distance(H0, H1, parent.centroid) > 0 else 1
        polygon = unfold_face_about_edge(self.vertices[list(vids)], (self.vertices[u], self.vertices[v]),
                                         hinge_image=(H0, H1), side=side, tol=self.tol)
        placed = PlacedFace(face_id, vids, polygon, kind, parent=parent_id, hinge=(u, v))
        self.faces[face_id] = placed
        return placed

    # -------------------------------------------------------------------------
    # structure
    # -------------------------------------------------------------------------

    def roots(self) -> List[int]:
        return [k for k, f in self.faces.items() if f.parent is None]

    def hinges(self) -> List[FrozenSet[int]]:
        return [frozenset(f.hinge) for f in self.faces.values() if f.hinge is not None]

    def cuts(self) -> List[Tuple[int, int]]:
        """Surface edges shared by two placed faces that are not hinges."""
        count: Dict[FrozenSet[int], int] = {}
        for f in self.faces.values():
            vids = f.vertices
            for i in range(len(vids)):
                key = frozenset((vids[i], vids[(i + 1) % len(vids)]))
                count[key] = count.get(key, 0) + 1
        hinged = set(self.hinges())
        return sorted(tuple(sorted(e)) for e, c in count.items() if c == 2 and e not in hinged)

    def tree_of(self, face_id: int) -> int:
        seen = set()
        while self.faces[face_id].parent is not None:
            if face_id in seen:
                raise InvalidInput("Attachment links form a cycle")
            seen.add(face_id)
            face_id = self.faces[face_id].parent
        return face_id

    def isometry_residual(self) -> float:
        """Largest deviation between planar and spatial vertex distances over all faces."""
        if self.vertices is None:
            return 0.0
        worst = 0.0
        for f in self.faces.values():
            P3 = self.vertices[list(f.vertices)]
            d3 = np.linalg.norm(P3[:, None, :] - P3[None, :, :], axis=-1)
            d2 = np.linalg.norm(f.polygon[:, None, :] - f.polygon[None, :, :], axis=-1)
            worst = max(worst, float(np.abs(d3 - d2).max()))
        return worst

    def faces_at(self, vid: int) -> List[int]:
        return [k for k, f in self.faces.items() if vid in f.vertices]

    def placed_angle_sum(self, vid: int, faces: Optional[Iterable[int]] = None) -> float:
        total = 0.0
        for k in (self.faces_at(vid) if faces is None else faces):
            f = self.faces[k]
            i = f.vertices.index(vid)
            poly = f.polygon
            total += angle_at(poly[i], poly[(i + 1) % len(poly)], poly[i - 1])
        return total

    def translated(self, offset) -> 'Layout':
        return self.transformed(np.eye(2), offset)

    def transformed(self, rotation, offset) -> 'Layout':
        """Copy with every polygon mapped by p -> R p + offset."""
        R = np.asarray(rotation, dtype=float)
        t = np.asarray(offset, dtype=float)
        out = Layout(self.vertices, self.surface_faces, self.tol)
        for k, f in self.faces.items():
            out.faces[k] = PlacedFace(k, f.vertices, f.polygon @ R.T + t, f.kind, f.parent, f.hinge)
        out.meta = dict(self.meta)
        return out

    # -------------------------------------------------------------------------
    # serialization
    # -------------------------------------------------------------------------

    def to_dict(self) -> Dict:
        return {
            'faces': [{
                'id': f.face_id,
                'kind': f.kind,
                'vertices': list(f.vertices),
                'polygon': f.polygon.tolist(),
                'parent': f.parent,
                'hinge': list(f.hinge) if f.hinge is not None else None,
            } for f in self.faces.values()],
            'cuts': [list(c) for c in self.cuts()],
            'meta': self.meta,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'Layout':
        try:
            entries = data['faces']
            max_id = max((int(e['id']) for e in entries), default=-1)
            surface: List[Tuple[int, ...]] = [()] * (max_id + 1)
            for e in entries:
                surface[int(e['id'])] = tuple(int(v) for v in e.get('vertices') or range(len(e['polygon'])))
            layout = cls(None, surface, Tolerance(eps_len=1e-9))
            for e in entries:
                fid = int(e['id'])
                hinge = e.get('hinge')
                layout.faces[fid] = PlacedFace(fid, surface[fid], as_polygon(e['polygon'], 2), e.get('kind', 'face'),
                                               e.get('parent'), tuple(hinge) if hinge else None)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidInput):
                raise
            raise InvalidInput(f"Malformed layout: {exc}")
        polys = [f.polygon for f in layout.faces.values()]
        if polys:
            layout.tol = Tolerance(eps_len=1e-9 * max(diameter(np.vstack(polys)), 1e-300))
        layout.meta = dict(data.get('meta') or {})
        return layout


# =============================================================================
# PRISMATOID PLACEMENT
# =============================================================================

def base_layout(P, surface: Sequence[Sequence[int]]) -> Layout:
    """Base B in place (at z = 0) with every B-triangle developed about its base edge."""
    L = Layout(P.vertices, surface, P.tolerance)
    base_id = len(P.faces)
    L.place_root(base_id, polygon=P.B.copy(), vertices=P.base_vertices, kind='base')
    for k in P.structure.b_face:
        f = P.faces[k]
        L.place_child(base_id, k, (f.vertices[0], f.vertices[1]), kind='B')
    return L


def place_fan(L: Layout, P, b: int, split: int) -> List[int]:
    """
    Place the A-triangles of the fan at base vertex b

    The first `split` triangles are chained from the left B-triangle (base
    edge b-1), the rest backward from the right B-triangle (base edge b).

    Returns:
        Face ids placed, in fan order
    """
    st = P.structure
    fan = st.fans[b]
    if not 0 <= split <= len(fan):
        raise InvalidInput(f"Split {split} out of range 0..{len(fan)} at base vertex {b}")
    prev = st.b_face[(b - 1) % P.m]
    for t in range(split):
        k = fan[t]
        L.place_child(prev, k, shared_edge(P, prev, k), kind='A')
        prev = k
    prev = st.b_face[b]
    for t in range(len(fan) - 1, split - 1, -1):
        k = fan[t]
        L.place_child(prev, k, shared_edge(P, prev, k), kind='A')
        prev = k
    return list(fan)


def place_top(L: Layout, P, a_face: int) -> PlacedFace:
    """Attach the top A across the A-edge of the given (placed) A-triangle."""
    f = P.faces[a_face]
    if f.kind != 'A':
        raise InvalidInput(f"Top can only attach to an A-triangle, face {a_face} is a {f.kind}-triangle")
    return L.place_child(a_face, len(P.faces) + 1, (f.vertices[0], f.vertices[1]), kind='top')


def shared_edge(P, j: int, k: int) -> Tuple[int, int]:
    shared = [v for v in P.faces[j].vertices if v in P.faces[k].vertices]
    if len(shared) != 2:
        raise InvalidInput(f"Faces {j} and {k} do not share an edge")
    return shared[0], shared[1]

