"""
Instance Generator Configuration
Shape biases, caps and the default z-grid for randomized scans.
"""

# =============================================================================
# SHAPE BIASES
# =============================================================================
# radius_* are the mean radii of the random polygons, jitter the relative
# radial noise, offset the max displacement of A's centre, z_rel the height
# range as a fraction of the footprint diameter (sampled log-uniformly).
# stream keeps the random draws of each bias apart for the same seed.
# Optional: sides fixes the polygon size, twist the range of A's rotation
# against B (regular draws), nonobtuse rejects instances with an obtuse
# lateral face or top.

SHAPE_BIASES = {
    'generic': {
        'stream': 0,
        'radius_A': (0.3, 1.3),
        'radius_B': (0.3, 1.3),
        'jitter': 0.3,
        'offset': 0.4,
        'z_rel': (1e-3, 10.0),
        'regular': False,
    },
    'near-flat': {
        'stream': 1,
        'radius_A': (0.3, 1.3),
        'radius_B': (0.3, 1.3),
        'jitter': 0.3,
        'offset': 0.4,
        'z_rel': (1e-3, 9e-3),
        'regular': False,
    },
    'drum-like': {
        'stream': 2,
        'radius_A': (0.85, 0.95),
        'radius_B': (1.0, 1.0),
        'jitter': 0.02,
        'offset': 0.02,
        'z_rel': (0.02, 0.2),
        'regular': True,
    },
    'thin': {
        'stream': 3,
        'radius_A': (0.9, 1.0),
        'radius_B': (1.0, 1.1),
        'jitter': 0.05,
        'offset': 0.03,
        'z_rel': (0.05, 0.5),
        'regular': False,
    },
    'nonobtuse': {
        'stream': 4,
        'radius_A': (0.3, 0.45),
        'radius_B': (1.0, 1.0),
        'jitter': 0.08,
        'offset': 0.05,
        'z_rel': (0.5, 1.5),
        'regular': True,
        'sides': 3,
        'twist': (0.8, 1.3),
        'nonobtuse': True,
    },
}

# =============================================================================
# LIMITS
# =============================================================================

DEFAULT_VERTEX_RANGE = (3, 12)
RETRY_CAP = 1000
PETAL_ENUMERATION_CAP = 10 ** 6
SPANNING_TREE_CAP = 10 ** 5

# Powers of two from 2^-6 to 2^4, relative to the instance diameter
Z_GRID = tuple(2.0 ** k for k in range(-6, 5))
