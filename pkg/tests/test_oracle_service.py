from fractions import Fraction

import pytest

from conftest import pts
from lattice_sumsets import BudgetExceededError, Box, InputError
from lattice_sumsets.services.compression_service import compress
from lattice_sumsets.services.oracle_service import OracleService
from lattice_sumsets.services.progression_service import ProgressionService
from lattice_sumsets.services.sumset_service import affine_dimension, doubling_constant, minkowski_sum, unit_cube
from lattice_sumsets.utils.random_sets import random_points


@pytest.fixture
def oracles():
    return OracleService()


def test_find_parallelepiped_in_cube(oracles):
    witness = oracles.find_parallelepiped(unit_cube(3), 3)
    assert witness.v0 == (0, 0, 0)
    assert witness.directions == ((0, 0, 1), (0, 1, 0), (1, 0, 0))
    assert witness.vertices() == unit_cube(3)


def test_find_parallelepiped_examples(oracles):
    assert oracles.find_parallelepiped(pts((0, 0), (1, 1), (2, 2)), 2) is None
    witness = oracles.find_parallelepiped(pts(0, 1, 2), 1)
    assert witness.v0 == (0,)
    assert witness.directions == ((1,),)


def test_find_parallelepiped_budgets():
    small = OracleService(max_parallelepiped_points=4, max_parallelepiped_dim=2)
    with pytest.raises(BudgetExceededError):
        small.find_parallelepiped(pts(*range(5)), 1)
    with pytest.raises(BudgetExceededError):
        small.find_parallelepiped(unit_cube(2), 3)


def test_parallelepiped_witnesses_revalidate(oracles, rng):
    for _ in range(30):
        A = random_points(rng, 8, 2, 0, 3)
        d = oracles.max_parallelepiped_dimension(A)
        if d:
            witness = oracles.find_parallelepiped(A, d)
            assert witness.vertices().issubset(A)
            assert len(witness.vertices()) == 2 ** d


def test_max_parallelepiped_dimension_examples(oracles):
    assert oracles.max_parallelepiped_dimension(unit_cube(2)) == 2
    assert oracles.max_parallelepiped_dimension(pts(0, 1, 2, 4)) == 1
    assert oracles.max_parallelepiped_dimension(pts((0, 0), (1, 0), (0, 1), (1, 1), (5, 7))) == 2
    assert oracles.max_parallelepiped_dimension(pts((3, 3))) == 0


def test_min_doubling_search_examples(oracles):
    A, value = oracles.min_doubling_search(Box((3,)), 3)
    assert (A, value) == (pts(0, 1, 2), 5)

    A, value = oracles.min_doubling_search(Box((2, 2)), 4)
    assert value == 9

    A, value = oracles.min_doubling_search(Box((2, 2)), 3)
    assert value == 6
    assert A == pts((0, 0), (0, 1), (1, 0))


@pytest.mark.parametrize("k", [3, 5, 7])
def test_min_doubling_on_intervals_is_progression_value(oracles, k):
    for n in range(1, k + 1):
        _, value = oracles.min_doubling_search(Box((k,)), n)
        assert value == 2 * n - 1


def test_min_doubling_search_budget():
    with pytest.raises(BudgetExceededError):
        OracleService(max_search=10).min_doubling_search(Box((4, 4)), 8)
    with pytest.raises(InputError):
        OracleService().min_doubling_search(Box((2,)), 3)


def test_lacunary_examples(oracles):
    for m in range(1, 5):
        assert doubling_constant(oracles.lacunary_example(1, m)) == Fraction(2 * m - 1, m)

    A = oracles.lacunary_example(2, 3)
    assert len(A) == 6
    assert len(minkowski_sum(A, A)) == 15
    assert doubling_constant(A) == Fraction(5, 2) == Fraction(3 * 5, 6)

    assert ProgressionService().freiman_dimension(oracles.lacunary_example(2, 2)) == 2


def test_lacunary_sumset_sizes(oracles):
    for K in range(1, 5):
        for m in range(1, 7):
            A = oracles.lacunary_example(K, m)
            assert len(A) == K * m
            assert len(minkowski_sum(A, A)) == K * (K + 1) * (2 * m - 1) // 2


def test_lacunary_rejects_bad_parameters(oracles):
    with pytest.raises(InputError):
        oracles.lacunary_example(0, 3)


def test_cube_times_interval_doubling(oracles):
    for d in range(1, 4):
        for k in range(1, 5):
            A = oracles.cube_times_interval(d, k)
            assert len(A) == 2 ** (d - 1) * k
            assert doubling_constant(A) == Fraction(3, 2) ** (d - 1) * Fraction(2 * k - 1, k)


def test_greedy_sidon_set(oracles):
    assert oracles.greedy_sidon_set(6) == pts(0, 1, 3, 7, 12, 20)
    S = oracles.greedy_sidon_set(8)
    assert len(minkowski_sum(S, S)) == 8 * 9 // 2


def test_noncommuting_compressions_witness(oracles):
    found = oracles.find_noncommuting_compressions(Box((3, 3)), 4)
    assert found is not None
    A, i, j = found
    assert compress(compress(A, j), i) != compress(compress(A, i), j)
    assert len(A) == 2


def test_freiman_oracle_small_sets(oracles):
    d, mapping, in_box = oracles.freiman_dimension_search(pts(0, 1, 3))
    assert (d, in_box) == (2, True)
    assert mapping.source == pts(0, 1, 3)
    assert mapping.target == pts((0, 0), (-1, 0), (0, -1))

    d, mapping, in_box = oracles.freiman_dimension_search(pts(0, 1, 2, 3))
    assert (d, in_box) == (1, True)
    assert mapping.target == pts(0, -1, -2, -3)

    assert oracles.freiman_dimension_search(pts(0, 1, 3, 7))[::2] == (3, True)
    assert oracles.freiman_dimension_search(pts(1, 2, 101, 102))[::2] == (2, True)
    assert oracles.freiman_dimension_search(unit_cube(2))[::2] == (2, True)


def test_freiman_oracle_reaches_eight_points(oracles):
    sidon = oracles.greedy_sidon_set(8)
    assert oracles.freiman_dimension_search(sidon)[::2] == (7, True)

    grid = pts(*((x, y) for x in range(3) for y in range(3) if (x, y) != (2, 2)))
    d, mapping, _ = oracles.freiman_dimension_search(grid)
    assert d == 2
    assert ProgressionService().verify_freiman_hom(mapping).parameters["isomorphism"]


def test_freiman_oracle_agrees_with_relation_rank(oracles, rng):
    progressions = ProgressionService()
    for _ in range(40):
        A = random_points(rng, int(rng.integers(2, 9)), 2, 0, 4)
        d, mapping, _ = oracles.freiman_dimension_search(A)
        assert d == progressions.freiman_dimension(A)
        assert mapping.source == A
        assert affine_dimension(mapping.target) == d
        assert progressions.verify_freiman_hom(mapping).parameters["isomorphism"]


def test_freiman_oracle_divides_out_broken_relations(oracles):
    # Generators {1, 2} overcount: 0 + 2 = 1 + 1 forces 2 = 2 * 1.
    relations = oracles._relations([(0,), (1,), (2,)])
    assert oracles._eliminate(3, relations, (1, 2), [], [0]) == [[0], [1], [2]]


def test_freiman_oracle_box_witness_with_half_coordinates(oracles):
    half = Fraction(1, 2)
    coords = [[0, 0], [1, 0], [0, 1], [half, half]]
    coords = [[Fraction(x) for x in c] for c in coords]
    assert oracles._box_witness(coords, 1, [0]) == [(0, 0), (-1, -1), (-1, 1), (-1, 0)]


def test_freiman_oracle_preconditions():
    with pytest.raises(InputError):
        OracleService().freiman_dimension_search(pts(0))
    with pytest.raises(InputError):
        OracleService().freiman_dimension_search(pts(0, 1), radius=0)
    with pytest.raises(BudgetExceededError):
        OracleService(max_oracle_nodes=3).freiman_dimension_search(pts(0, 1, 3, 7))
