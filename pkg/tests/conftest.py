import pytest

from lattice_sumsets import LatticeToolkit, PointSet
from lattice_sumsets.utils.random_sets import make_rng


def pts(*points):
    """Shorthand: pts(0, 1, 3) or pts((0, 1), (1, 0))."""
    return PointSet.of(points)


@pytest.fixture
def toolkit():
    return LatticeToolkit()


@pytest.fixture
def rng():
    return make_rng(12345)
