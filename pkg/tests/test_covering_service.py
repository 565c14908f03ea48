import math
from fractions import Fraction

import pytest

from conftest import pts
from lattice_sumsets import Box, InputError, Progression
from lattice_sumsets.services.covering_service import BOUNDING_BOX, SUPPLIED, floor_log2_plus
from lattice_sumsets.services.sumset_service import box_points
from lattice_sumsets.utils.random_sets import random_points, random_subset


@pytest.fixture
def covering(toolkit):
    return toolkit.covering


def _covered(cover, progressions):
    base = progressions.enumerate(cover.base)
    return all(
        any(tuple(x - y for x, y in zip(a, o)) in base for o in cover.offsets)
        for a in cover.covered
    )


@pytest.mark.parametrize("K,epsilon,expected", [
    (Fraction(1), Fraction(0), 0),
    (Fraction(2), Fraction(0), 1),
    (Fraction(4), Fraction(1), 3),
    (Fraction(21, 8), Fraction(1, 2), 1),
    (Fraction(5, 2), Fraction(1), 2),
    (Fraction(11, 6), Fraction(1), 1),
])
def test_floor_log2_plus_examples(K, epsilon, expected):
    assert floor_log2_plus(K, epsilon) == expected


def test_floor_log2_plus_matches_floats_away_from_boundaries(rng):
    epsilons = [Fraction(1, 5), Fraction(1, 3), Fraction(1, 2), Fraction(3, 4), Fraction(1)]
    checked = 0
    for _ in range(10_000):
        den = int(rng.integers(1, 1000))
        num = int(rng.integers(den + 1, den * 10 ** 6))
        eps = epsilons[int(rng.integers(0, len(epsilons)))]
        approx = math.log2(num) - math.log2(den) + float(eps)
        if abs(approx - round(approx)) < 1e-9:
            continue
        assert floor_log2_plus(Fraction(num, den), eps) == math.floor(approx), (num, den, eps)
        checked += 1
    assert checked > 9_900


def test_floor_log2_plus_rejects_bad_arguments():
    with pytest.raises(InputError):
        floor_log2_plus(Fraction(1, 2), Fraction(1))
    with pytest.raises(InputError):
        floor_log2_plus(Fraction(2), Fraction(-1))


def test_fibre_decomposition_examples(covering):
    box = Box((3, 2))
    fibres = covering.fibre_decomposition(box_points(box), box, 0)
    assert [x for x, _ in fibres] == [(0,), (1,)]
    assert [len(F) for _, F in fibres] == [3, 3]

    fibres = covering.fibre_decomposition(pts((0, 0), (2, 1)), box, 0)
    assert fibres == [((0,), pts((0, 0))), ((1,), pts((2, 1)))]

    fibres = covering.fibre_decomposition(box_points(box), box, 1)
    assert len(fibres) == 1


def test_fibre_decomposition_preconditions(covering):
    with pytest.raises(InputError):
        covering.fibre_decomposition(pts((0, 0)), Box((2, 3)), 0)
    with pytest.raises(InputError):
        covering.fibre_decomposition(pts((0, 0)), Box((3, 2)), 2)
    with pytest.raises(InputError):
        covering.fibre_decomposition(pts((0, 2)), Box((3, 2)), 0)


def test_fibre_inequality_on_random_sets(covering, rng):
    box = Box((4, 3, 2))
    for _ in range(30):
        A = random_subset(rng, box)
        for l in (0, 1, 2):
            report = covering.verify_fibre_inequality(A, box, l)
            assert report.passed, report.summary_line()
            assert report.parameters["disjoint"]


def test_cover_box_examples(covering):
    box = Box((3, 2))
    assert covering.cover_box(box, 1) == [(0, 0), (0, 1)]
    assert covering.cover_box(box, 2) == [(0, 0)]
    assert len(covering.cover_box(box, 0)) == 6
    with pytest.raises(InputError):
        covering.cover_box(box, 3)


def test_cover_box_tiles_the_box(covering):
    box = Box((4, 3, 2))
    for l in range(4):
        tiles = set()
        for o in covering.cover_box(box, l):
            for p in box_points(Box(box.lengths[:l] + (1,) * (3 - l))):
                tiles.add(tuple(x + y for x, y in zip(o, p)))
        assert tiles == set(box_points(box).points)


def test_cover_with_two_dimensional_container(covering, toolkit):
    A = pts(0, 1, 10, 11, 20, 21)
    P = Progression.of(0, [1, 10], [2, 3])
    cover, report = covering.freiman_bilu_cover(A, P, Fraction(1))
    assert cover.parameters["K"] == Fraction(5, 2)
    assert cover.parameters["l"] == 2
    assert cover.parameters["container"] == SUPPLIED
    assert cover.count == 1
    assert report.passed
    assert _covered(cover, toolkit.progressions)


def test_cover_two_blocks_by_supplied_progression(covering, toolkit):
    A = pts(0, 1, 2, 3, 100, 101, 102, 103)
    P = Progression.of(0, [1, 100], [4, 2])
    cover, report = covering.freiman_bilu_cover(A, P, Fraction(1, 2))
    assert cover.parameters["K"] == Fraction(21, 8)
    assert cover.parameters["l"] == 1
    assert cover.count == 2
    assert cover.offsets == ((0,), (100,))
    assert cover.base == Progression.of(0, [1], [4])
    assert report.passed
    assert all(check.passed for check in cover.checks)
    assert _covered(cover, toolkit.progressions)


def test_cover_falls_back_to_bounding_box(covering, toolkit):
    A = pts(0, 1, 2, 3, 100, 101, 102, 103)
    cover, report = covering.freiman_bilu_cover(A, None, Fraction(1, 2))
    assert cover.parameters["container"] == BOUNDING_BOX
    assert cover.base.size() <= len(A)
    assert cover.count == 2
    assert report.passed
    assert _covered(cover, toolkit.progressions)


def test_cover_of_interval(covering):
    cover, report = covering.freiman_bilu_cover(pts(*range(6)), None, Fraction(1))
    assert cover.parameters["l"] == 1
    assert cover.count == 1
    assert report.passed


def test_cover_rejects_bad_epsilon(covering):
    with pytest.raises(InputError):
        covering.freiman_bilu_cover(pts(0, 1), None, Fraction(0))
    with pytest.raises(InputError):
        covering.freiman_bilu_cover(pts(0, 1), None, Fraction(3, 2))


def test_cover_random_planar_sets(covering, toolkit, rng):
    for _ in range(25):
        A = random_points(rng, int(rng.integers(1, 10)), 2, 0, 6)
        cover, report = covering.freiman_bilu_cover(A, None, Fraction(1, 2))
        assert report.passed
        assert all(check.passed for check in cover.checks)
        assert cover.base.dim <= cover.parameters["l"]
        assert _covered(cover, toolkit.progressions)
        assert cover.to_dict()["count"] == cover.count
