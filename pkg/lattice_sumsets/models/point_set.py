from dataclasses import dataclass, field
from fractions import Fraction
from typing import FrozenSet, Iterable, Iterator, List, Optional, Tuple

from ..exceptions import InputError

LatticePoint = Tuple[int, ...]
Rational = Fraction


def _as_point(raw) -> LatticePoint:
    try:
        point = tuple(int(c) for c in raw)
    except (TypeError, ValueError) as e:
        raise InputError(f"Not an integer point: {raw!r}") from e
    for original, value in zip(raw, point):
        if isinstance(original, float) or value != original:
            raise InputError(f"Non-integer coordinate in {raw!r}")
    return point


@dataclass(frozen=True)
class PointSet:
    """Finite set of integer points of a fixed ambient dimension."""
    ambient_dim: int
    points: FrozenSet[LatticePoint] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.ambient_dim < 1:
            raise InputError(f"Ambient dimension must be positive, got {self.ambient_dim}")
        for p in self.points:
            if len(p) != self.ambient_dim:
                raise InputError(f"Point {p} does not have dimension {self.ambient_dim}")

    @classmethod
    def of(cls, points: Iterable, ambient_dim: Optional[int] = None) -> "PointSet":
        """
        Build a point set from any iterable of coordinate sequences.

        Bare integers are accepted as 1-dimensional points.

        Args:
            points: Coordinates, e.g. ``[(0, 1), (1, 0)]`` or ``[0, 1, 3]``
            ambient_dim: Required when ``points`` is empty

        Returns:
            The deduplicated PointSet
        """
        normalized = []
        for raw in points:
            if isinstance(raw, int):
                raw = (raw,)
            normalized.append(_as_point(raw))
        if ambient_dim is None:
            if not normalized:
                raise InputError("Cannot infer the ambient dimension of an empty set")
            ambient_dim = len(normalized[0])
        return cls(ambient_dim, frozenset(normalized))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[LatticePoint]:
        return iter(self.sorted_points())

    def __contains__(self, point) -> bool:
        return tuple(point) in self.points

    def __bool__(self) -> bool:
        return bool(self.points)

    def sorted_points(self) -> List[LatticePoint]:
        """Points in lexicographic order (the canonical output order)."""
        return sorted(self.points)

    def issubset(self, other: "PointSet") -> bool:
        return self.ambient_dim == other.ambient_dim and self.points <= other.points

    def union(self, other: "PointSet") -> "PointSet":
        self.require_same_dim(other)
        return PointSet(self.ambient_dim, self.points | other.points)

    def require_same_dim(self, other: "PointSet"):
        if self.ambient_dim != other.ambient_dim:
            raise InputError(
                f"Dimension mismatch: {self.ambient_dim} vs {other.ambient_dim}"
            )

    def require_nonempty(self, what: str = "set"):
        if not self.points:
            raise InputError(f"The {what} must be non-empty")

    def require_nonnegative(self, what: str = "set"):
        for p in self.points:
            if any(c < 0 for c in p):
                raise InputError(f"The {what} has a negative coordinate at {p}; translate it into N_0^d first")

    def bounds(self) -> Tuple[LatticePoint, LatticePoint]:
        """Coordinate-wise minimum and maximum."""
        self.require_nonempty()
        lo = tuple(min(c) for c in zip(*self.points))
        hi = tuple(max(c) for c in zip(*self.points))
        return lo, hi

    def translate(self, shift: Iterable[int]) -> "PointSet":
        shift = tuple(shift)
        if len(shift) != self.ambient_dim:
            raise InputError(f"Shift {shift} does not have dimension {self.ambient_dim}")
        return PointSet(self.ambient_dim, frozenset(
            tuple(c + s for c, s in zip(p, shift)) for p in self.points
        ))

    def permute_axes(self, order: Iterable[int]) -> "PointSet":
        """New set whose axis ``k`` is this set's axis ``order[k]`` (0-based)."""
        order = tuple(order)
        if sorted(order) != list(range(self.ambient_dim)):
            raise InputError(f"Not a permutation of the axes: {order}")
        return PointSet(self.ambient_dim, frozenset(
            tuple(p[k] for k in order) for p in self.points
        ))

    def to_lists(self) -> List[List[int]]:
        return [list(p) for p in self.sorted_points()]


@dataclass(frozen=True)
class Box:
    """The box [L_1] x ... x [L_d], where [n] = {0, ..., n-1}."""
    lengths: Tuple[int, ...]

    def __post_init__(self):
        if not self.lengths:
            raise InputError("A box needs at least one side")
        if any(not isinstance(L, int) or L < 1 for L in self.lengths):
            raise InputError(f"Box side lengths must be positive integers: {self.lengths}")

    @property
    def dim(self) -> int:
        return len(self.lengths)

    @property
    def volume(self) -> int:
        v = 1
        for L in self.lengths:
            v *= L
        return v

    def contains(self, points: PointSet) -> bool:
        if points.ambient_dim != self.dim:
            return False
        return all(
            all(0 <= c < L for c, L in zip(p, self.lengths)) for p in points.points
        )

    def is_sorted_descending(self) -> bool:
        return all(a >= b for a, b in zip(self.lengths, self.lengths[1:]))
