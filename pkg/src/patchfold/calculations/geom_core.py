"""
Geometry Core
Planar and spatial primitives: orientation, segment intersection, angles,
developing a spatial face into the plane about a hinge, reflection.

Points are numpy float arrays of shape (2,) or (3,). Polygons are (k, 2) or
(k, 3) arrays. Every public entry point rejects NaN/inf coordinates.
"""
import math
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from patchfold.config.tolerances import DEFAULT_TOLERANCES, load_tolerances
from patchfold.errors import (DegenerateAngle, DegenerateHinge, InvalidInput,
                              NonFiniteInput, NonPlanarFace)

logger = logging.getLogger(__name__)


# =============================================================================
# TYPES
# =============================================================================

@dataclass(frozen=True)
class Tolerance:
    """Absolute length tolerance plus angular tolerance (radians)."""
    eps_len: float
    eps_ang: float = DEFAULT_TOLERANCES['eps_ang']

    def __post_init__(self):
        if not (self.eps_len > 0 and self.eps_ang > 0):
            raise InvalidInput(f"Tolerances must be positive, got {self}")

    @classmethod
    def for_diameter(cls, diameter: float, settings: Optional[dict] = None) -> 'Tolerance':
        settings = settings or load_tolerances()
        scale = diameter if diameter > 0 else 1.0
        return cls(eps_len=settings['eps_len_rel'] * scale, eps_ang=settings['eps_ang'])


@dataclass(frozen=True, eq=False)
class Segment2:
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'a', as_point(self.a, 2))
        object.__setattr__(self, 'b', as_point(self.b, 2))
        if np.array_equal(self.a, self.b):
            raise InvalidInput("Segment endpoints coincide")


@dataclass(frozen=True, eq=False)
class Ray2:
    origin: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'origin', as_point(self.origin, 2))
        d = as_point(self.direction, 2)
        n = float(np.hypot(d[0], d[1]))
        if n == 0:
            raise InvalidInput("Ray direction is zero")
        object.__setattr__(self, 'direction', d / n)

    def at(self, t: float) -> np.ndarray:
        return self.origin + t * self.direction


@dataclass(frozen=True, eq=False)
class Line2:
    origin: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'origin', as_point(self.origin, 2))
        d = as_point(self.direction, 2)
        if not np.any(d):
            raise InvalidInput("Line direction is zero")
        object.__setattr__(self, 'direction', d)

    @classmethod
    def through(cls, p, q) -> 'Line2':
        p = as_point(p, 2)
        return cls(p, as_point(q, 2) - p)


# =============================================================================
# CONSTRUCTION / VALIDATION
# =============================================================================

def as_point(p, dim: Optional[int] = None) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1 or (dim is not None and arr.shape[0] != dim):
        raise InvalidInput(f"Expected a {dim or ''}D point, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput(f"Non-finite coordinate in {arr.tolist()}")
    return arr


def as_polygon(points, dim: int = 2) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise InvalidInput(f"Expected a list of {dim}D points, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput("Non-finite coordinate in polygon")
    return arr


def unit(v: np.ndarray) -> np.ndarray:
    n = float(np.linalg.norm(v))
    if n == 0:
        raise InvalidInput("Cannot normalize a zero vector")
    return v / n


def cross2(u, v) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


def rot90(v, sense: int = 1) -> np.ndarray:
    """Rotate a planar vector by +90 (sense=1, ccw) or -90 degrees."""
    if sense > 0:
        return np.array([-v[1], v[0]], dtype=float)
    return np.array([v[1], -v[0]], dtype=float)


def outward_normal(p, q) -> np.ndarray:
    """Unit normal to the right of p->q, i.e. outward for a ccw polygon edge."""
    d = np.asarray(q, dtype=float) - np.asarray(p, dtype=float)
    return unit(np.array([d[1], -d[0]]))


def signed_angle(u, v) -> float:
    """Angle from u to v in (-pi, pi], ccw positive."""
    return math.atan2(cross2(u, v), float(np.dot(u, v)))


def polygon_area(poly) -> float:
    poly = np.asarray(poly, dtype=float)
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def diameter(points) -> float:
    pts = np.asarray(points, dtype=float)
    if len(pts) < 2:
        return 0.0
    diff = pts[:, None, :] - pts[None, :, :]
    return float(np.sqrt((diff ** 2).sum(axis=-1)).max())


def point_segment_distance(p, a, b) -> float:
    p, a, b = (np.asarray(x, dtype=float) for x in (p, a, b))
    d = b - a
    l2 = float(np.dot(d, d))
    t = 0.0 if l2 == 0 else min(1.0, max(0.0, float(np.dot(p - a, d)) / l2))
    return float(np.linalg.norm(p - (a + t * d)))


def point_ray_distance(p, origin, direction) -> float:
    p, o = np.asarray(p, dtype=float), np.asarray(origin, dtype=float)
    d = unit(np.asarray(direction, dtype=float))
    t = max(0.0, float(np.dot(p - o, d)))
    return float(np.linalg.norm(p - (o + t * d)))


# =============================================================================
# PREDICATES
# =============================================================================

def orient2d(p, q, r, eps: Optional[float] = None) -> int:
    """
    Orientation of the triangle pqr

    Points are first sorted lexicographically and the determinant evaluated
    in that canonical order, so swapping any two arguments flips the sign
    exactly. The result snaps to 0 when r is within eps of the line through
    the other two (eps defaults to a relative tolerance of the longest edge).

    Args:
        p, q, r: planar points
        eps: absolute distance tolerance

    Returns:
        +1 (ccw), 0 (collinear), -1 (cw)
    """
    pts = [as_point(p, 2), as_point(q, 2), as_point(r, 2)]
    order = sorted(range(3), key=lambda k: (pts[k][0], pts[k][1]))
    parity = _permutation_parity(order)
    a, b, c = (pts[k] for k in order)
    det = cross2(b - a, c - a)
    scale = max(float(np.hypot(*(b - a))), float(np.hypot(*(c - a))), float(np.hypot(*(c - b))))
    if scale == 0:
        return 0
    if eps is None:
        eps = DEFAULT_TOLERANCES['eps_len_rel'] * scale
    if abs(det) <= eps * scale:
        return 0
    sign = 1 if det > 0 else -1
    return sign * parity


def _permutation_parity(order: Sequence[int]) -> int:
    inversions = sum(1 for i in range(3) for j in range(i + 1, 3) if order[i] > order[j])
    return -1 if inversions % 2 else 1


def side_distance(a, b, p) -> float:
    """Signed distance of p from the line a->b (positive on the left)."""
    d = np.asarray(b, dtype=float) - np.asarray(a, dtype=float)
    n = float(np.hypot(d[0], d[1]))
    if n == 0:
        return 0.0
    return cross2(d, np.asarray(p, dtype=float) - np.asarray(a, dtype=float)) / n


def segments_properly_intersect(s1: Segment2, s2: Segment2, eps: Optional[float] = None) -> bool:
    """
    True iff the two segments share interior points.

    Touching at endpoints (including collinear end-to-end contact) is not an
    intersection; a collinear overlap of positive length is.
    """
    a, b, c, d = s1.a, s1.b, s2.a, s2.b
    o1, o2 = orient2d(a, b, c, eps), orient2d(a, b, d, eps)
    o3, o4 = orient2d(c, d, a, eps), orient2d(c, d, b, eps)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if o1 == 0 and o2 == 0 and o3 == 0 and o4 == 0:
        direction = unit(b - a)
        t = sorted([0.0, float(np.dot(b - a, direction))])
        u = sorted([float(np.dot(c - a, direction)), float(np.dot(d - a, direction))])
        overlap = min(t[1], u[1]) - max(t[0], u[0])
        limit = eps if eps is not None else DEFAULT_TOLERANCES['eps_len_rel'] * max(t[1], u[1] - u[0])
        return overlap > limit
    return False


def ray_intersection_params(o1, d1, o2, d2) -> Optional[Tuple[float, float]]:
    """Parameters (t, u) with o1 + t d1 = o2 + u d2, or None for parallel lines."""
    den = cross2(d1, d2)
    if abs(den) < 1e-15 * float(np.linalg.norm(d1) * np.linalg.norm(d2)):
        return None
    w = np.asarray(o2, dtype=float) - np.asarray(o1, dtype=float)
    return cross2(w, d2) / den, cross2(w, d1) / den


# =============================================================================
# ANGLES / REFLECTION
# =============================================================================

def angle_at(apex, u, v) -> float:
    """Unsigned angle in [0, pi] between rays apex->u and apex->v (2D or 3D)."""
    apex = as_point(apex)
    a = as_point(u, len(apex)) - apex
    b = as_point(v, len(apex)) - apex
    if not np.any(a) or not np.any(b):
        raise DegenerateAngle(f"Angle at {apex.tolist()} has a coincident endpoint")
    if len(apex) == 2:
        return abs(math.atan2(cross2(a, b), float(np.dot(a, b))))
    return math.atan2(float(np.linalg.norm(np.cross(a, b))), float(np.dot(a, b)))


def reflect_across_line(p, line: Line2) -> np.ndarray:
    p = as_point(p, 2)
    d = line.direction
    t = float(np.dot(p - line.origin, d)) / float(np.dot(d, d))
    foot = line.origin + t * d
    return 2.0 * foot - p


# =============================================================================
# DEVELOPMENT
# =============================================================================

def face_normal(face3) -> np.ndarray:
    """Newell normal (unnormalized) of a spatial polygon; ccw seen from its tip."""
    f = np.asarray(face3, dtype=float)
    return np.cross(f, np.roll(f, -1, axis=0)).sum(axis=0)


def planarity_residual(face3) -> float:
    f = np.asarray(face3, dtype=float)
    if len(f) <= 3:
        return 0.0
    n = face_normal(f)
    norm = float(np.linalg.norm(n))
    if norm == 0:
        return float('inf')
    return float(np.abs((f - f.mean(axis=0)) @ (n / norm)).max())


def unfold_face_about_edge(face, hinge, hinge_image=None, side: int = 1,
                           tol: Optional[Tolerance] = None) -> np.ndarray:
    """
    Rotate a spatial face rigidly about a hinge into the plane

    Args:
        face: (k, 3) vertices of a planar face
        hinge: pair of 3D points on the face boundary
        hinge_image: planar images of the hinge endpoints; defaults to their
            xy coordinates, i.e. the target plane is z = 0 and the hinge lies in it
        side: +1 places the face left of hinge_image[0]->hinge_image[1], -1 right
        tol: tolerance for the hinge, planarity and in-plane checks

    Returns:
        (k, 2) planar polygon, congruent to the face
    """
    f = as_polygon(face, 3)
    h0, h1 = as_point(hinge[0], 3), as_point(hinge[1], 3)
    tol = tol or Tolerance.for_diameter(diameter(f))
    e3 = h1 - h0
    length = float(np.linalg.norm(e3))
    if length <= tol.eps_len:
        raise DegenerateHinge(f"Hinge {h0.tolist()}-{h1.tolist()} has length {length:.3g}")
    if planarity_residual(f) > tol.eps_len:
        raise NonPlanarFace(f"Face is off its plane by {planarity_residual(f):.3g}")

    if hinge_image is None:
        if abs(h0[2]) > tol.eps_len or abs(h1[2]) > tol.eps_len:
            raise InvalidInput("Hinge does not lie in the target plane z = 0")
        H0, H1 = h0[:2].copy(), h1[:2].copy()
    else:
        H0, H1 = as_point(hinge_image[0], 2), as_point(hinge_image[1], 2)

    in_plane = (np.abs(f[:, 2]).max() <= tol.eps_len
                and np.linalg.norm(H0 - h0[:2]) <= tol.eps_len
                and np.linalg.norm(H1 - h1[:2]) <= tol.eps_len)
    if in_plane:
        flat = f[:, :2].copy()
        current = side_distance(H0, H1, flat.mean(axis=0))
        if current == 0 or np.sign(current) == side:
            return flat
        line = Line2.through(H0, H1)
        return np.array([reflect_across_line(p, line) for p in flat])

    e = e3 / length
    E = unit(H1 - H0)
    N = rot90(E, 1)
    w = f - h0
    t = w @ e
    perp = w - np.outer(t, e)
    d = np.linalg.norm(perp, axis=1)
    return H0 + np.outer(t, E) + np.outer(side * d, N)
