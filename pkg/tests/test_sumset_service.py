from fractions import Fraction
from itertools import combinations, product

import pytest

from conftest import pts
from lattice_sumsets import Box, InputError, PointSet
from lattice_sumsets.services.sumset_service import (
    affine_dimension,
    affine_map,
    box_points,
    difference_set,
    doubling_constant,
    integer_rank,
    iterated_sum,
    minkowski_sum,
    project,
    unit_cube,
)
from lattice_sumsets.utils.random_sets import random_points, random_subset

L_SHAPE = pts((0, 1), (1, 0), (2, 0))


def test_sum_of_origins():
    assert minkowski_sum(pts(0), pts(0)) == pts(0)


@pytest.mark.parametrize("backend", ["auto", "hash", "grid"])
def test_l_shape_doubled(backend):
    S = minkowski_sum(L_SHAPE, L_SHAPE, backend=backend)
    assert S == pts((0, 2), (1, 1), (2, 1), (2, 0), (3, 0), (4, 0))
    assert len(S) == 6


@pytest.mark.parametrize("backend", ["hash", "grid"])
def test_square_plus_square_is_dilated_square(backend):
    square = box_points(Box((2, 2)))
    assert minkowski_sum(square, square, backend=backend) == box_points(Box((3, 3)))


def test_backends_agree_on_random_sets(rng):
    for _ in range(50):
        A = random_points(rng, 12, 2, -5, 5)
        B = random_points(rng, 9, 2, -3, 7)
        assert minkowski_sum(A, B, backend="hash") == minkowski_sum(A, B, backend="grid")


def test_backends_agree_on_huge_coordinates():
    A = pts(0, 10 ** 30, 2 * 10 ** 30)
    assert minkowski_sum(A, A, backend="hash") == minkowski_sum(A, A, backend="auto")
    assert len(minkowski_sum(A, A)) == 5


def test_sum_rejects_dimension_mismatch():
    with pytest.raises(InputError):
        minkowski_sum(pts(0), pts((0, 0)))


def test_sum_rejects_empty_operand():
    with pytest.raises(InputError):
        minkowski_sum(PointSet(1, frozenset()), pts(0))


def test_sum_rejects_unknown_backend():
    with pytest.raises(InputError):
        minkowski_sum(pts(0), pts(1), backend="gpu")


def test_sum_is_commutative_and_translation_covariant(rng):
    for _ in range(30):
        A = random_points(rng, 6, 2, 0, 6)
        B = random_points(rng, 5, 2, 0, 6)
        t = (3, -7)
        assert minkowski_sum(A, B) == minkowski_sum(B, A)
        assert minkowski_sum(A.translate(t), B) == minkowski_sum(A, B).translate(t)


def test_one_dimensional_sum_size_bounds(rng):
    for _ in range(100):
        A = random_points(rng, int(rng.integers(1, 8)), 1, 0, 20)
        B = random_points(rng, int(rng.integers(1, 8)), 1, 0, 20)
        size = len(minkowski_sum(A, B))
        assert size >= max(len(A), len(B))
        assert size >= len(A) + len(B) - 1


def test_iterated_sum():
    cube = unit_cube(2)
    assert iterated_sum([cube, cube, cube]) == box_points(Box((4, 4)))
    with pytest.raises(InputError):
        iterated_sum([])


def test_difference_set():
    assert difference_set(pts(0, 1), pts(0, 1)) == pts(-1, 0, 1)
    X = pts((0, 0), (1, 0), (0, 1))
    assert len(difference_set(X, unit_cube(2))) == len(minkowski_sum(X, unit_cube(2)))


def test_doubling_constant_examples():
    assert doubling_constant(pts(0)) == 1
    assert doubling_constant(unit_cube(2)) == Fraction(9, 4)
    assert doubling_constant(pts(0, 1, 2, 3)) == Fraction(7, 4)


@pytest.mark.parametrize("k,d", list(product(range(1, 5), range(1, 4))))
def test_doubling_constant_of_cubes(k, d):
    assert doubling_constant(box_points(Box((k,) * d))) == Fraction(2 * k - 1, k) ** d


def test_doubling_constant_rejects_empty():
    with pytest.raises(InputError):
        doubling_constant(PointSet(2, frozenset()))


def test_project_examples():
    square = box_points(Box((2, 2)))
    assert project(square, {1}) == pts((0, 0), (1, 0))
    assert project(square, set()) == pts((0, 0))
    assert project(pts((0, 0), (1, 0), (0, 1)), {2}) == pts((0, 0), (0, 1))


def test_project_rejects_bad_axis():
    with pytest.raises(InputError):
        project(pts((0, 0)), {3})
    with pytest.raises(InputError):
        project(pts((0, 0)), {0})


def test_project_composes_by_intersection(rng):
    axes = [set(c) for r in range(4) for c in combinations((1, 2, 3), r)]
    X = random_subset(rng, Box((3, 3, 3)))
    for I in axes:
        for J in axes:
            assert project(project(X, I), J) == project(X, I & J)


def test_affine_dimension_examples():
    assert affine_dimension(pts((4, 4))) == 0
    assert affine_dimension(pts((0, 0), (1, 1), (2, 2))) == 1
    assert affine_dimension(unit_cube(3)) == 3


def test_affine_dimension_invariant_under_invertible_maps(rng):
    for _ in range(20):
        A = random_points(rng, 5, 2, -4, 4)
        image, injective = affine_map(A, [[1, 1], [0, 1]], (3, -2))
        assert injective
        assert affine_dimension(image) == affine_dimension(A)


def test_affine_map_examples():
    A = pts((2, 5), (3, 7))
    assert affine_map(A) == (A, True)
    assert affine_map(A, shift=(-2, -5)) == (pts((0, 0), (1, 2)), True)
    assert affine_map(pts(0, 1, 2), [[0]]) == (pts(0), False)


def test_affine_map_rejects_bad_shapes():
    with pytest.raises(InputError):
        affine_map(pts((0, 0)), [[1, 0, 0]])
    with pytest.raises(InputError):
        affine_map(pts((0, 0)), shift=(1,))


def test_integer_rank():
    assert integer_rank([]) == 0
    assert integer_rank([[0, 0], [0, 0]]) == 0
    assert integer_rank([[1, 2], [2, 4]]) == 1
    assert integer_rank([[1, 0, 0], [0, 1, 0], [1, 1, 0]]) == 2


def test_unit_cube_embedding():
    assert unit_cube(1, ambient_dim=3) == pts((0, 0, 0), (1, 0, 0))
    assert len(unit_cube(4)) == 16
    with pytest.raises(InputError):
        unit_cube(3, ambient_dim=2)
