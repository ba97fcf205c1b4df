"""
Banded Hexagon Fit
Searches the two-radius hexagonal prismatoid family for an instance whose
top vertices have curvature 7.5 deg / 2 deg (alternating) and none of whose
12 band unfoldings is free of overlap. Writes the fitted parameters and a
plot of the best band unfolding's overlap depth per cut.

Run from the repository root:  python sandbox/fit_banded_hexagon.py
"""
import os
import sys
import math
import logging

import numpy as np
import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
from scipy.optimize import minimize

PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(PROJECT_ROOT, 'src'))

from patchfold.calculations.overlap_verifier import separation
from patchfold.calculations.patch_model import prismatoid_polyhedron, vertex_curvature
from patchfold.calculations.prismatoid_model import build_prismatoid
from patchfold.calculations.unfolder import band_unfoldings
from patchfold.data.fixtures import BANDED_HEXAGON_PARAMS, hexagon_from_params
from patchfold.data.io import dumps
from patchfold.errors import PatchfoldError

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

OUTPUT_DIR = os.path.join(PROJECT_ROOT, 'runs', 'banded_hexagon_fit')
TARGET_CURVATURE = np.radians([7.5, 2.0, 7.5, 2.0, 7.5, 2.0])
DEPTH_MARGIN = 0.02
INFEASIBLE = 1e6


def overlap_depths(P):
    """Deepest face-pair penetration of each band unfolding (<= 0 means clean)."""
    depths = []
    for _, L in band_unfoldings(P, include_top=True):
        polys = list(L.polygons().values())
        deepest = max(-separation(polys[i], polys[j])
                      for i in range(len(polys)) for j in range(i + 1, len(polys)))
        depths.append(deepest)
    return np.array(depths)


def objective(params):
    try:
        A, B, z = hexagon_from_params(params)
        P = build_prismatoid(A, B, z)
        poly, _ = prismatoid_polyhedron(P)
    except PatchfoldError:
        return INFEASIBLE
    curvature = np.array([vertex_curvature(poly, v) for v in P.top_vertices])
    misfit = float(np.sum((curvature - TARGET_CURVATURE) ** 2)) / math.radians(1.0) ** 2
    shortfall = np.clip(DEPTH_MARGIN - overlap_depths(P), 0.0, None)
    return misfit + 100.0 * float(np.sum(shortfall ** 2))


def main():
    os.makedirs(OUTPUT_DIR, exist_ok=True)
    start = np.array(BANDED_HEXAGON_PARAMS)
    logger.info(f"Starting Nelder-Mead from objective {objective(start):.6g}")
    result = minimize(objective, start, method='Nelder-Mead',
                      options={'maxiter': 4000, 'xatol': 1e-10, 'fatol': 1e-12})
    logger.info(f"Converged={result.success} after {result.nit} iterations, objective {result.fun:.6g}")

    A, B, z = hexagon_from_params(result.x)
    P = build_prismatoid(A, B, z)
    poly, _ = prismatoid_polyhedron(P)
    curvature = [math.degrees(vertex_curvature(poly, v)) for v in P.top_vertices]
    depths = overlap_depths(P)
    logger.info(f"Top curvature (deg): {np.round(curvature, 4).tolist()}")
    logger.info(f"Band cuts overlapping: {int(np.sum(depths > 0))} of {len(depths)}")

    with open(os.path.join(OUTPUT_DIR, 'params.json'), 'w') as fh:
        fh.write(dumps({'params': result.x, 'prismatoid': P, 'curvature_deg': curvature,
                        'depths': depths}) + '\n')

    fig, ax = plt.subplots(figsize=(10, 5))
    ax.bar(range(len(depths)), depths, color=['#c0392b' if d > 0 else '#27ae60' for d in depths])
    ax.axhline(0.0, color='black', linewidth=0.8)
    ax.set_xlabel('Band cut (lateral edge)')
    ax.set_ylabel('Deepest overlap')
    ax.set_title('Banded hexagon: overlap depth per band unfolding')
    plt.tight_layout()
    plt.savefig(os.path.join(OUTPUT_DIR, 'overlap_depths.png'), dpi=150, bbox_inches='tight')
    plt.close()
    logger.info(f"Wrote {OUTPUT_DIR}")


if __name__ == '__main__':
    main()
