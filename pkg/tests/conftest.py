"""
Shared instances for the test suite
"""
import pytest

from patchfold.calculations.prismatoid_model import build_prismatoid
from patchfold.calculations.patch_model import polyhedron_from_faces
from patchfold.calculations.sweeps import sum_pi_prismatoid
from patchfold.data.fixtures import banded_hexagon, counterexample_nv, drum, regular_polygon, wings

GOLDEN = (1 + 5 ** 0.5) / 2

OCTAHEDRON_VERTICES = [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]]
OCTAHEDRON_FACES = [[0, 2, 4], [2, 1, 4], [1, 3, 4], [3, 0, 4], [2, 0, 5], [1, 2, 5], [3, 1, 5], [0, 3, 5]]

ICOSAHEDRON_VERTICES = [[-1, GOLDEN, 0], [1, GOLDEN, 0], [-1, -GOLDEN, 0], [1, -GOLDEN, 0],
                        [0, -1, GOLDEN], [0, 1, GOLDEN], [0, -1, -GOLDEN], [0, 1, -GOLDEN],
                        [GOLDEN, 0, -1], [GOLDEN, 0, 1], [-GOLDEN, 0, -1], [-GOLDEN, 0, 1]]
ICOSAHEDRON_FACES = [[0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11], [1, 5, 9], [5, 11, 4],
                     [11, 10, 2], [10, 7, 6], [7, 1, 8], [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8],
                     [3, 8, 9], [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1]]


@pytest.fixture(scope='session')
def hexagon():
    return banded_hexagon()


@pytest.fixture(scope='session')
def drum_prismatoid():
    return drum()


@pytest.fixture(scope='session')
def wings_prismatoid():
    return wings()


@pytest.fixture(scope='session')
def counterexample():
    return counterexample_nv()


@pytest.fixture(scope='session')
def equilateral():
    """Nonobtuse triangular prismatoid: small equilateral top rotated 60 deg over a unit one."""
    return build_prismatoid(regular_polygon(3, 0.4, 150.0), regular_polygon(3, 1.0, 90.0), 1.0)


@pytest.fixture(scope='session')
def sum_pi():
    return sum_pi_prismatoid()


@pytest.fixture(scope='session')
def octahedron():
    return polyhedron_from_faces(OCTAHEDRON_VERTICES, OCTAHEDRON_FACES)


@pytest.fixture(scope='session')
def icosahedron():
    return polyhedron_from_faces(ICOSAHEDRON_VERTICES, ICOSAHEDRON_FACES)
