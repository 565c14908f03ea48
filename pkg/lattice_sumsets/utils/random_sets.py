"""Seeded random instances; the generator is numpy's PCG64 so runs replay exactly."""
from typing import Optional

import numpy as np

from ..exceptions import InputError
from ..models import Box, PointSet
from ..services.sumset_service import box_points

GENERATOR_NAME = "PCG64"


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_subset(rng: np.random.Generator, box: Box, density: float = 0.5) -> PointSet:
    """Non-empty random subset of the box, each point kept independently."""
    points = box_points(box).sorted_points()
    while True:
        keep = rng.random(len(points)) < density
        chosen = [p for p, k in zip(points, keep) if k]
        if chosen:
            return PointSet(box.dim, frozenset(chosen))


def random_points(rng: np.random.Generator, size: int, dim: int, low: int, high: int,
                  max_attempts: Optional[int] = None) -> PointSet:
    """``size`` distinct points with coordinates drawn uniformly from [low, high]."""
    span = high - low + 1
    if size < 1 or span ** dim < size:
        raise InputError(f"Cannot draw {size} distinct points from a grid of {span ** dim}")
    points = set()
    attempts = 0
    while len(points) < size:
        attempts += 1
        if max_attempts is not None and attempts > max_attempts:
            raise InputError("Too many attempts drawing distinct points")
        points.add(tuple(int(c) for c in rng.integers(low, high + 1, size=dim)))
    return PointSet(dim, frozenset(points))
