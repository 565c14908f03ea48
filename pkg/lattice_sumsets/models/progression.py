from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterator, List, Sequence, Tuple

from ..exceptions import InputError
from .point_set import LatticePoint, PointSet


@dataclass(frozen=True)
class Progression:
    """Generalized arithmetic progression x0 + [L1]*x1 + ... + [Ld]*xd."""
    base: LatticePoint
    generators: Tuple[LatticePoint, ...]
    lengths: Tuple[int, ...]

    def __post_init__(self):
        if len(self.generators) != len(self.lengths):
            raise InputError(
                f"{len(self.generators)} generators but {len(self.lengths)} lengths"
            )
        if not self.base:
            raise InputError("Progression base must have dimension at least 1")
        for g in self.generators:
            if len(g) != len(self.base):
                raise InputError(f"Generator {g} does not match base dimension {len(self.base)}")
        if any(not isinstance(L, int) or L < 1 for L in self.lengths):
            raise InputError(f"Progression lengths must be positive integers: {self.lengths}")

    @classmethod
    def of(cls, base: Sequence[int], generators: Sequence, lengths: Sequence[int]) -> "Progression":
        """Convenience constructor accepting bare integers for 1-dimensional data."""
        def pt(v):
            return (int(v),) if isinstance(v, int) else tuple(int(c) for c in v)
        return cls(pt(base), tuple(pt(g) for g in generators), tuple(int(L) for L in lengths))

    @property
    def dim(self) -> int:
        return len(self.lengths)

    @property
    def ambient_dim(self) -> int:
        return len(self.base)

    def size(self, t: int = 1) -> int:
        """Product of the (dilated) lengths; 1 for a 0-dimensional progression."""
        s = 1
        for L in self.lengths:
            s *= t * L
        return s

    def point(self, mu: Sequence[int]) -> LatticePoint:
        coords = list(self.base)
        for m, g in zip(mu, self.generators):
            if m:
                for k, c in enumerate(g):
                    coords[k] += m * c
        return tuple(coords)

    def coefficients(self, t: int = 1) -> Iterator[Tuple[int, ...]]:
        """All coefficient tuples of tP in lexicographic order."""
        return product(*(range(t * L) for L in self.lengths))

    def reordered(self, order: Sequence[int]) -> "Progression":
        """Same progression with generators listed in ``order`` (0-based)."""
        return Progression(
            self.base,
            tuple(self.generators[k] for k in order),
            tuple(self.lengths[k] for k in order),
        )


@dataclass(frozen=True)
class Correspondence:
    """Bijection between two point sets, given as (source, image) pairs."""
    pairs: Tuple[Tuple[LatticePoint, LatticePoint], ...]

    def __post_init__(self):
        if not self.pairs:
            raise InputError("A correspondence needs at least one pair")
        sources = [a for a, _ in self.pairs]
        images = [b for _, b in self.pairs]
        if len(set(sources)) != len(sources):
            raise InputError("Correspondence is not a function: repeated source point")
        if len(set(images)) != len(images):
            raise InputError("Correspondence is not injective: repeated image point")
        if len({len(a) for a in sources}) != 1 or len({len(b) for b in images}) != 1:
            raise InputError("Correspondence mixes point dimensions")

    @classmethod
    def from_mapping(cls, mapping: Dict[LatticePoint, LatticePoint]) -> "Correspondence":
        return cls(tuple(sorted((tuple(a), tuple(b)) for a, b in mapping.items())))

    @classmethod
    def from_lists(cls, sources: PointSet, images: List[LatticePoint]) -> "Correspondence":
        """Pair the points of ``sources`` (in canonical order) with ``images`` in the given order."""
        ordered = sources.sorted_points()
        if len(ordered) != len(images):
            raise InputError(f"{len(ordered)} source points but {len(images)} images")
        return cls(tuple(zip(ordered, (tuple(b) for b in images))))

    def forward(self) -> Dict[LatticePoint, LatticePoint]:
        return dict(self.pairs)

    def inverse(self) -> "Correspondence":
        return Correspondence(tuple(sorted((b, a) for a, b in self.pairs)))

    @property
    def source(self) -> PointSet:
        return PointSet.of([a for a, _ in self.pairs])

    @property
    def target(self) -> PointSet:
        return PointSet.of([b for _, b in self.pairs])
