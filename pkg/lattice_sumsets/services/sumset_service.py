"""Primitive operations on finite lattice sets: sums, projections, ranks."""
import logging
from fractions import Fraction
from itertools import product
from typing import Iterable, List, Optional, Sequence, Tuple

from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix

from ..exceptions import InputError
from ..models import Box, LatticePoint, PointSet

logger = logging.getLogger(__name__)

BACKENDS = ("auto", "hash", "grid")

# The bit-grid kernel is used by "auto" when the output box has at most this many cells.
GRID_CELL_LIMIT = 1 << 20


def _grid_strides(lengths: Sequence[int]) -> List[int]:
    strides = [1] * len(lengths)
    for k in range(len(lengths) - 2, -1, -1):
        strides[k] = strides[k + 1] * lengths[k + 1]
    return strides


def _grid_index(point: Sequence[int], origin: Sequence[int], strides: Sequence[int]) -> int:
    return sum((c - o) * s for c, o, s in zip(point, origin, strides))


def _grid_decode(bits: int, origin: Sequence[int], lengths: Sequence[int],
                 strides: Sequence[int]) -> List[LatticePoint]:
    points = []
    while bits:
        low = bits & -bits
        bits ^= low
        idx = low.bit_length() - 1
        coords = []
        for o, L, s in zip(origin, lengths, strides):
            coords.append(o + (idx // s) % L)
        points.append(tuple(coords))
    return points


def sum_grid_shape(A: PointSet, B: PointSet) -> Tuple[LatticePoint, Tuple[int, ...]]:
    """Origin and side lengths of the bounding box of A + B."""
    lo_a, hi_a = A.bounds()
    lo_b, hi_b = B.bounds()
    origin = tuple(a + b for a, b in zip(lo_a, lo_b))
    lengths = tuple((ha - la) + (hb - lb) + 1 for la, ha, lb, hb in zip(lo_a, hi_a, lo_b, hi_b))
    return origin, lengths


def grid_encode(points: Iterable[LatticePoint], origin: Sequence[int], lengths: Sequence[int]) -> int:
    """Bitmask of ``points`` in the row-major grid with the given origin and sides."""
    strides = _grid_strides(lengths)
    bits = 0
    for p in points:
        bits |= 1 << _grid_index(p, origin, strides)
    return bits


def grid_offset(point: Sequence[int], origin: Sequence[int], lengths: Sequence[int]) -> int:
    return _grid_index(point, origin, _grid_strides(lengths))


def _sum_grid(A: PointSet, B: PointSet) -> PointSet:
    origin, lengths = sum_grid_shape(A, B)
    strides = _grid_strides(lengths)
    lo_a, _ = A.bounds()
    lo_b, _ = B.bounds()
    # B placed at the output origin; each a shifts it by its offset from lo_a.
    b_bits = 0
    for b in B.points:
        b_bits |= 1 << _grid_index(b, lo_b, strides)
    acc = 0
    for a in A.points:
        acc |= b_bits << _grid_index(a, lo_a, strides)
    return PointSet(A.ambient_dim, frozenset(_grid_decode(acc, origin, lengths, strides)))


def _sum_hash(A: PointSet, B: PointSet) -> PointSet:
    return PointSet(A.ambient_dim, frozenset(
        tuple(x + y for x, y in zip(a, b)) for a in A.points for b in B.points
    ))


def _choose_backend(A: PointSet, B: PointSet, backend: str) -> str:
    if backend not in BACKENDS:
        raise InputError(f"Unknown backend {backend!r}; expected one of {', '.join(BACKENDS)}")
    if backend != "auto":
        return backend
    if len(A) * len(B) < 64:
        return "hash"
    _, lengths = sum_grid_shape(A, B)
    cells = 1
    for L in lengths:
        cells *= L
        if cells > GRID_CELL_LIMIT:
            return "hash"
    return "grid"


def minkowski_sum(A: PointSet, B: PointSet, backend: str = "auto") -> PointSet:
    """
    Minkowski sum {a + b : a in A, b in B}.

    Args:
        A: First operand, non-empty
        B: Second operand, non-empty, same ambient dimension
        backend: ``hash`` (sparse), ``grid`` (shift-and-or over a bit grid) or ``auto``

    Returns:
        The deduplicated sumset; identical for every backend
    """
    A.require_same_dim(B)
    A.require_nonempty("first summand")
    B.require_nonempty("second summand")
    if _choose_backend(A, B, backend) == "grid":
        return _sum_grid(A, B)
    return _sum_hash(A, B)


def iterated_sum(sets: Sequence[PointSet], backend: str = "auto") -> PointSet:
    if not sets:
        raise InputError("Need at least one summand")
    total = sets[0]
    for S in sets[1:]:
        total = minkowski_sum(total, S, backend=backend)
    return total


def negate(A: PointSet) -> PointSet:
    return PointSet(A.ambient_dim, frozenset(tuple(-c for c in p) for p in A.points))


def difference_set(A: PointSet, B: PointSet, backend: str = "auto") -> PointSet:
    """{a - b : a in A, b in B}."""
    return minkowski_sum(A, negate(B), backend=backend)


def doubling_constant(A: PointSet, backend: str = "auto") -> Fraction:
    """sigma[A] = |A + A| / |A| as an exact fraction."""
    A.require_nonempty()
    return Fraction(len(minkowski_sum(A, A, backend=backend)), len(A))


def _check_axes(axes: Iterable[int], dim: int) -> frozenset:
    axes = frozenset(axes)
    for i in axes:
        if not isinstance(i, int) or not 1 <= i <= dim:
            raise InputError(f"Axis {i} out of range 1..{dim}")
    return axes


def project(X: PointSet, axes: Iterable[int]) -> PointSet:
    """
    Orthogonal projection pi_I: zero every coordinate whose axis is not in I.

    Axes are numbered from 1. The ambient dimension is kept.
    """
    axes = _check_axes(axes, X.ambient_dim)
    keep = [k + 1 in axes for k in range(X.ambient_dim)]
    return PointSet(X.ambient_dim, frozenset(
        tuple(c if kept else 0 for c, kept in zip(p, keep)) for p in X.points
    ))


def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals of an integer matrix given by rows."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return 0
    return DomainMatrix([[ZZ(c) for c in r] for r in rows], (len(rows), len(rows[0])), ZZ).rank()


def affine_dimension(A: PointSet) -> int:
    """Dimension of the affine hull of A (rank of the differences a - a0)."""
    A.require_nonempty()
    points = A.sorted_points()
    a0 = points[0]
    return integer_rank([[c - o for c, o in zip(p, a0)] for p in points[1:]])


def affine_map(A: PointSet,
               matrix: Optional[Sequence[Sequence[int]]] = None,
               shift: Optional[Sequence[int]] = None) -> Tuple[PointSet, bool]:
    """
    Image of A under x -> M x + shift.

    Args:
        A: Input set
        matrix: Integer matrix with ``ambient_dim`` columns (identity when omitted)
        shift: Translation vector in the output dimension (zero when omitted)

    Returns:
        (image, injective) where ``injective`` tells whether |image| == |A|
    """
    if matrix is None:
        matrix = [[1 if r == c else 0 for c in range(A.ambient_dim)] for r in range(A.ambient_dim)]
    matrix = [list(r) for r in matrix]
    if not matrix or any(len(r) != A.ambient_dim for r in matrix):
        raise InputError(f"Matrix must have {A.ambient_dim} columns")
    out_dim = len(matrix)
    shift = tuple(shift) if shift is not None else (0,) * out_dim
    if len(shift) != out_dim:
        raise InputError(f"Shift has dimension {len(shift)}, expected {out_dim}")
    image = frozenset(
        tuple(sum(m * c for m, c in zip(row, p)) + s for row, s in zip(matrix, shift))
        for p in A.points
    )
    result = PointSet(out_dim, image)
    return result, len(result) == len(A)


def unit_cube(d: int, ambient_dim: Optional[int] = None) -> PointSet:
    """{0,1}^d placed in the first d coordinates of Z^ambient_dim."""
    ambient_dim = d if ambient_dim is None else ambient_dim
    if d < 0 or d > ambient_dim or ambient_dim < 1:
        raise InputError(f"Cannot embed {{0,1}}^{d} in dimension {ambient_dim}")
    pad = (0,) * (ambient_dim - d)
    return PointSet(ambient_dim, frozenset(bits + pad for bits in product((0, 1), repeat=d)))


def box_points(box: Box) -> PointSet:
    """All points of [L1] x ... x [Ld]."""
    return PointSet(box.dim, frozenset(product(*(range(L) for L in box.lengths))))
