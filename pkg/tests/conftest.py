"""Shared bodies for the hhgeom tests."""
import numpy as np
import pytest

from hhgeom.bodies import cone_over_base, cross_polytope, cube, random_hull, scaled_slab_body
from hhgeom.polytope import Polytope


@pytest.fixture
def cube3() -> Polytope:
    return cube(3)


@pytest.fixture
def cross3() -> Polytope:
    return cross_polytope(3)


@pytest.fixture
def pyramid() -> Polytope:
    """conv([-1, 1]^2 x {0} U {e3}): volume 4/3, centroid height 1/4."""
    return cone_over_base(cube(2))


@pytest.fixture
def slab3() -> Polytope:
    """conv({(-1, 0, 0)} U {1} x [0, 2]^2): volume 8/3, slice area (1 + t)^2."""
    return scaled_slab_body(3, 1)


@pytest.fixture
def random_body4() -> Polytope:
    return random_hull(4, count=20, seed=3)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
