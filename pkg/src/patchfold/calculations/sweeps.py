"""
Height Sweeps
Property checks of a prismatoid family P(z) over a grid of heights:

    hull_combinatorics_check    face structure is the same at every height
                                (and agrees with a scipy hull)
    ray_check                   altitude rays never cross
    apex_track_check            unfolded apexes move outward on one line
    angle_monotonicity_check    a lateral triangle's top angles approach pi/2
    lateral_angle_checks        the same for every A-triangle of an instance
    chain_angle_facts_check     a-chain angles keep their class and approach pi

Heights in a grid are relative to the instance diameter.
"""
import math
import logging
from typing import Dict, List, Optional, Sequence

import numpy as np

from patchfold.calculations.fans import chain_angle
from patchfold.calculations.geom_core import angle_at, as_point, outward_normal, ray_intersection_params, unit
from patchfold.calculations.patch_model import convex_hull3, prismatoid_polyhedron
from patchfold.calculations.prismatoid_model import Prismatoid, at_height, build_prismatoid, fan_chain
from patchfold.calculations.regions import altitude_partition, apex_track, crossing_rays
from patchfold.config.generator import Z_GRID
from patchfold.errors import InvalidInput

logger = logging.getLogger(__name__)

CONVEX = 'convex'
REFLEX = 'reflex'
STRAIGHT = 'straight'


def absolute_heights(P: Prismatoid, z_grid: Optional[Sequence[float]] = None) -> List[float]:
    grid = Z_GRID if z_grid is None else z_grid
    return [float(z) * P.diameter for z in grid]


# =============================================================================
# HULL / RAYS / APEX TRACKS
# =============================================================================

def hull_faces_agree(P: Prismatoid) -> bool:
    """Does the merge-based face structure match scipy's hull of the same points?"""
    poly, _ = prismatoid_polyhedron(P)
    hull = convex_hull3(P.vertices)
    return {frozenset(f) for f in poly.faces} == {frozenset(f) for f in hull.faces}


def hull_combinatorics_check(P: Prismatoid, z_grid: Optional[Sequence[float]] = None) -> Dict:
    """
    Face structure at every grid height compared with the flat prismatoid

    Returns:
        {'heights', 'same_structure', 'hull_agrees', 'mismatches'}
    """
    reference = at_height(P, 0.0).structure.signature()
    heights = absolute_heights(P, z_grid)
    mismatches, disagreements = [], []
    for z in heights:
        Pz = at_height(P, z)
        if Pz.structure.signature() != reference:
            mismatches.append(z)
        if not hull_faces_agree(Pz):
            disagreements.append(z)
    if mismatches or disagreements:
        logger.warning(f"Hull structure changed at {mismatches}, scipy disagrees at {disagreements}")
    return {
        'heights': heights,
        'same_structure': not mismatches,
        'hull_agrees': not disagreements,
        'mismatches': mismatches + [z for z in disagreements if z not in mismatches],
    }


def ray_check(P: Prismatoid, z_grid: Optional[Sequence[float]] = None) -> Dict:
    """Crossing altitude-ray pairs at each grid height."""
    crossings = {}
    for z in absolute_heights(P, z_grid):
        Pz = at_height(P, z)
        pairs = crossing_rays(altitude_partition(Pz, check=False), Pz.tolerance.eps_len)
        if pairs:
            crossings[z] = pairs
    return {'heights': absolute_heights(P, z_grid), 'crossings': crossings, 'ok': not crossings}


def apex_track_check(P: Prismatoid, i: int, z_grid: Optional[Sequence[float]] = None) -> Dict:
    """
    Track of the unfolded apex of B-triangle i

    The apex must stay on the line through the apex's footprint
    perpendicular to base edge i, and move away from that edge as z grows.

    Returns:
        {'points', 'residual', 'offsets', 'monotone'}
    """
    heights = [0.0] + absolute_heights(P, z_grid)
    points = apex_track(P, i, heights)
    b0, b1 = P.B[i], P.B[(i + 1) % P.m]
    along = unit(b1 - b0)
    normal = outward_normal(b0, b1)
    foot = P.planar(P.faces[P.structure.b_face[i]].opposite)
    residual = float(np.abs((points - foot) @ along).max())
    offsets = (points - b0) @ normal
    monotone = bool(np.all(np.diff(offsets) > 0))
    return {'points': points, 'residual': residual, 'offsets': offsets, 'monotone': monotone}


# =============================================================================
# ANGLE MONOTONICITY
# =============================================================================

def canonical_frame(b, a1, a2) -> np.ndarray:
    """
    Coordinates (x, y) of a2 after moving a1 to the origin, rotating b's
    footprint onto (-1, 0) and scaling |b - a1| to 1
    """
    b, a1, a2 = as_point(b, 2), as_point(a1, 2), as_point(a2, 2)
    d = b - a1
    s = float(np.hypot(*d))
    if s == 0:
        raise InvalidInput("a1 coincides with b")
    u = -d / s                       # image of +x
    w = np.array([-u[1], u[0]])      # image of +y
    rel = (a2 - a1) / s
    return np.array([float(rel @ u), float(rel @ w)])


def closed_form_cos(x: float, y: float, z: float) -> float:
    """cos of the top angle in the canonical frame: -x / (sqrt(x^2 + y^2) sqrt(1 + z^2))."""
    return -x / (math.hypot(x, y) * math.sqrt(1.0 + z * z))


def _top_angle(apex, other_top, bottom, z: float) -> float:
    apex3 = np.array([apex[0], apex[1], z])
    other3 = np.array([other_top[0], other_top[1], z])
    bottom3 = np.array([bottom[0], bottom[1], 0.0])
    return angle_at(apex3, bottom3, other3)


def _approaches(values: np.ndarray, target: float, tol: float) -> bool:
    gaps = np.abs(values - target)
    return bool(np.all(np.diff(gaps) <= tol))


def angle_monotonicity_check(b, a1, a2, z_grid: Sequence[float], tol: float = 1e-9) -> Dict:
    """
    Top angles of the lateral triangle (b, a1, a2) as the top plane rises

    Args:
        b: base vertex footprint
        a1, a2: top edge endpoints (footprints)
        z_grid: increasing absolute heights
        tol: angular slack for the monotonicity tests

    Returns:
        Dict per top vertex ('a1', 'a2') with the angle sequence, the
        canonical coordinates, the largest |cos - closed form| and whether
        the sequence moves monotonically toward pi/2 in the direction the
        sign of x predicts
    """
    b, a1, a2 = as_point(b, 2), as_point(a1, 2), as_point(a2, 2)
    if np.array_equal(a1, a2):
        raise InvalidInput("a1 and a2 coincide")
    z = np.asarray(z_grid, dtype=float)
    if np.any(np.diff(z) <= 0):
        raise InvalidInput("Heights must be strictly increasing")

    out = {'z': z.tolist()}
    for name, apex, other in (('a1', a1, a2), ('a2', a2, a1)):
        x, y = canonical_frame(b, apex, other)
        s = float(np.hypot(*(b - apex)))
        angles = np.array([_top_angle(apex, other, b, zz) for zz in z])
        closed = np.array([closed_form_cos(x, y, zz / s) for zz in z])
        residual = float(np.abs(np.cos(angles) - closed).max())
        if abs(x) <= tol:
            trend = bool(np.all(np.abs(angles - math.pi / 2) <= tol))
        elif x > 0:
            trend = bool(np.all(angles > math.pi / 2 - tol) and np.all(np.diff(angles) < tol))
        else:
            trend = bool(np.all(angles < math.pi / 2 + tol) and np.all(np.diff(angles) > -tol))
        out[name] = {
            'x': float(x),
            'y': float(y),
            'angles': angles.tolist(),
            'residual': residual,
            'monotone': trend and _approaches(angles, math.pi / 2, tol),
        }
    return out


def lateral_angle_checks(P: Prismatoid, z_grid: Optional[Sequence[float]] = None, tol: float = 1e-9) -> Dict:
    """
    angle_monotonicity_check over every A-triangle of P

    Returns:
        {'faces': {face id: per-face result}, 'ok'}; ok needs every top angle
        sequence monotone and within tol of the closed form
    """
    heights = absolute_heights(P, z_grid)
    faces = {}
    for k, f in enumerate(P.faces):
        if f.kind != 'A':
            continue
        a1, a2 = f.vertices[0], f.vertices[1]
        faces[k] = angle_monotonicity_check(P.planar(f.opposite), P.planar(a1), P.planar(a2), heights, tol)
    ok = all(res[name]['monotone'] and res[name]['residual'] < tol
             for res in faces.values() for name in ('a1', 'a2'))
    if not ok:
        logger.warning(f"Top angles off their trend on {P.to_dict()}")
    return {'faces': faces, 'ok': ok}


# =============================================================================
# A-CHAIN FACTS
# =============================================================================

def angle_class(alpha: float, tol: float) -> str:
    if abs(alpha - math.pi) <= tol:
        return STRAIGHT
    return REFLEX if alpha > math.pi else CONVEX


def chain_angle_facts_check(P: Prismatoid, b: int, z_grid: Optional[Sequence[float]] = None,
                            tol: float = 1e-9) -> Dict:
    """
    Interior a-chain angles of the fan at b over the flat prismatoid and the grid

    For each interior chain vertex: the class (convex / reflex / straight)
    is the same at every height, and the angle moves monotonically toward pi.

    Returns:
        {'heights', 'vertices': {chain index: {...}}, 'ok'}
    """
    heights = [0.0] + absolute_heights(P, z_grid)
    family = [at_height(P, z) for z in heights]
    chain = fan_chain(P, b)
    vertices = {}
    ok = True
    for j in range(1, len(chain) - 1):
        alphas = np.array([chain_angle(Pz, b, chain, j) for Pz in family])
        classes = [angle_class(a, tol) for a in alphas]
        invariant = len(set(classes)) == 1
        toward_pi = _approaches(alphas, math.pi, tol)
        vertices[j] = {
            'vertex': chain[j],
            'angles': alphas.tolist(),
            'class': classes[0],
            'class_invariant': invariant,
            'toward_pi': toward_pi,
        }
        ok = ok and invariant and toward_pi
    return {'heights': heights, 'vertices': vertices, 'ok': ok}


def sum_pi_prismatoid(h: float = 0.5, z: float = 0.3) -> Prismatoid:
    """
    Prismatoid whose fan at b0 has a straight interior chain angle at every height

    The top is the triangle (1, -h), (0, 0), (-1, -h); b0 = (-1, 0) sits on the
    external bisector line at the apex (0, 0), where the two fan angles add
    to pi for every z.
    """
    if not h > 0:
        raise InvalidInput(f"h must be positive, got {h}")
    A = [[1.0, -h], [0.0, 0.0], [-1.0, -h]]
    B = [[-1.0, 0.0], [0.0, -3.0], [1.0, -3.2]]
    return build_prismatoid(A, B, z)


def straight_chain_gap(P: Prismatoid, b: int, z_grid: Optional[Sequence[float]] = None) -> float:
    """Largest |alpha_j - pi| over straight chain vertices and grid heights (0 if none)."""
    report = chain_angle_facts_check(P, b, z_grid, tol=1e-7)
    gaps = [abs(a - math.pi) for v in report['vertices'].values() if v['class'] == STRAIGHT for a in v['angles']]
    return max(gaps, default=0.0)


def ray_line_meets(P: Prismatoid) -> List[tuple]:
    """(i, j, t, u) for every pair of altitude rays whose lines meet at origin_i + t d_i = origin_j + u d_j."""
    rays = altitude_partition(P, check=False).rays
    out = []
    for i in range(len(rays)):
        for j in range(i + 1, len(rays)):
            params = ray_intersection_params(rays[i].origin, rays[i].direction, rays[j].origin, rays[j].direction)
            if params is not None:
                out.append((i, j, params[0], params[1]))
    return out
