"""
Fixtures
Literal instances that reproduce the known overlap and non-overlap cases:

    counterexample-nv  9-vertex polyhedron whose base vertex-neighborhood
                       has no nonoverlapping petal unfolding
    banded-hexagon     hexagonal prismatoid none of whose 12 band
                       unfoldings avoids overlap
    drum               twisted 7-gon drum: all-ccw petal unfolding with top
                       overlaps, topless it does not
    wings-ccw          near-flat triangular prismatoid where rotating every
                       A-triangle ccw crosses two of them
"""
import math
import logging
from typing import Tuple

import numpy as np

from patchfold.calculations.patch_model import ConvexPolyhedron, polyhedron_from_faces
from patchfold.calculations.prismatoid_model import Prismatoid, build_prismatoid
from patchfold.errors import InvalidInput

logger = logging.getLogger(__name__)

# =============================================================================
# COUNTEREXAMPLE POLYHEDRON
# =============================================================================
# b2, a1/a2, c1/c2 share z = 0.2; (a1, b1, c1, p1) and their mirrors in x = 0.

COUNTEREXAMPLE_NAMES = ('b1', 'b2', 'b3', 'a1', 'a2', 'c1', 'c2', 'p1', 'p3')

COUNTEREXAMPLE_VERTICES = (
    (2.0, -0.1, 0.0),
    (0.0, 0.0, 0.2),
    (-2.0, -0.1, 0.0),
    (0.603496, 0.0399127, 0.2),
    (-0.603496, 0.0399127, 0.2),
    (0.0124876, 0.501659, 0.2),
    (-0.0124876, 0.501659, 0.2),
    (6.03626, -0.4, -0.6),
    (-6.03626, -0.4, -0.6),
)

# By name; the hull of the rounded coordinates would re-triangulate near a1,
# so the face structure is given explicitly.
COUNTEREXAMPLE_FACES = (
    ('b1', 'b2', 'b3'),
    ('p1', 'b1', 'b3', 'p3'),
    ('b2', 'b1', 'a1'),
    ('a1', 'b1', 'c1'),
    ('b1', 'p1', 'c1'),
    ('b3', 'b2', 'a2'),
    ('a2', 'b2', 'a1'),
    ('c2', 'a2', 'a1', 'c1'),
    ('b3', 'a2', 'c2'),
    ('c2', 'p3', 'b3'),
    ('p3', 'c2', 'c1', 'p1'),
)

COUNTEREXAMPLE_SUPPORT_TOL = 1e-6

# =============================================================================
# BANDED HEXAGON
# =============================================================================
# Frozen output of sandbox/fit_banded_hexagon.py (6 decimals). Curvature is
# 7.5 deg at a1, a3, a5 and 2 deg at a2, a4, a6.

BANDED_HEXAGON = {
    'A': [[0.0, 1.100887], [-0.619431, 0.345631], [-0.953396, -0.550443],
          [0.01039, -0.709259], [0.953396, -0.550443], [0.609041, 0.363628]],
    'B': [[-0.335234, 2.139766], [-1.290069, 0.463616], [-1.685474, -1.360204],
          [0.243532, -1.349041], [2.020708, -0.779562], [1.046538, 0.885425]],
    'z': 0.355209,
}

# Parameters the fit converged to (ra, rs, rb, phi, z, psi, rb2, phi2)
BANDED_HEXAGON_PARAMS = (1.1008865985268717, 0.7093352582653896, 2.165866722355937,
                         8.90406582591858, 0.355209474077006, 0.8392790430695782,
                         1.3708457104469964, 1.3288798119792333)

# =============================================================================
# DRUM / WINGS
# =============================================================================

DRUM = {'sides': 7, 'radius_A': 0.9, 'offset_A': 100.0, 'radius_B': 1.0, 'offset_B': 90.0, 'z': 0.1}

WINGS = {
    'A': [[0.06, 0.31], [-0.66, 0.16], [0.78, -0.36]],
    'B': [[0.09, 0.02], [1.77, 1.05], [-1.4, 0.85]],
    'z': 0.05,
}


def regular_polygon(sides: int, radius: float, offset_deg: float) -> np.ndarray:
    """Vertex k at angle offset + 360 k / sides (degrees), ccw."""
    ang = np.radians(offset_deg + 360.0 * np.arange(sides) / sides)
    return np.column_stack([radius * np.cos(ang), radius * np.sin(ang)])


def hexagon_from_params(params) -> Tuple[np.ndarray, np.ndarray, float]:
    """
    Banded-hexagon family

    A_k at radius ra (k even) or rs (k odd), angle 90 + 60k (+psi for odd k);
    B_k at radius rb (k even) or rb2 (k odd), angle 90 + 60k + phi (+phi2 for odd k).
    """
    ra, rs, rb, phi, z, psi, rb2, phi2 = params
    A, B = [], []
    for k in range(6):
        odd = k % 2 == 1
        a_ang = math.radians(90 + 60 * k + (psi if odd else 0.0))
        b_ang = math.radians(90 + 60 * k + phi + (phi2 if odd else 0.0))
        ra_k = rs if odd else ra
        rb_k = rb2 if odd else rb
        A.append([ra_k * math.cos(a_ang), ra_k * math.sin(a_ang)])
        B.append([rb_k * math.cos(b_ang), rb_k * math.sin(b_ang)])
    return np.array(A), np.array(B), float(z)


def counterexample_nv() -> Tuple[ConvexPolyhedron, int]:
    """
    The 9-vertex counterexample polyhedron

    Returns:
        (polyhedron, base face index of B = (b1, b2, b3))
    """
    index = {name: k for k, name in enumerate(COUNTEREXAMPLE_NAMES)}
    faces = [[index[v] for v in f] for f in COUNTEREXAMPLE_FACES]
    poly = polyhedron_from_faces(COUNTEREXAMPLE_VERTICES, faces, names=COUNTEREXAMPLE_NAMES,
                                 support_tol=COUNTEREXAMPLE_SUPPORT_TOL)
    return poly, 0


def banded_hexagon() -> Prismatoid:
    return build_prismatoid(BANDED_HEXAGON['A'], BANDED_HEXAGON['B'], BANDED_HEXAGON['z'])


def drum() -> Prismatoid:
    A = regular_polygon(DRUM['sides'], DRUM['radius_A'], DRUM['offset_A'])
    B = regular_polygon(DRUM['sides'], DRUM['radius_B'], DRUM['offset_B'])
    return build_prismatoid(A, B, DRUM['z'])


def wings() -> Prismatoid:
    return build_prismatoid(WINGS['A'], WINGS['B'], WINGS['z'])


FIXTURES = {
    'counterexample-nv': counterexample_nv,
    'banded-hexagon': banded_hexagon,
    'drum': drum,
    'wings-ccw': wings,
}


def load_fixture(name: str):
    if name not in FIXTURES:
        raise InvalidInput(f"Unknown fixture '{name}' (available: {', '.join(FIXTURES)})")
    logger.info(f"Building fixture {name}")
    return FIXTURES[name]()

