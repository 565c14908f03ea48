import logging
from fractions import Fraction
from math import floor
from typing import Tuple

from ..exceptions import BudgetExceededError, InputError
from ..models import Box, PointSet, VerificationReport
from .compression_service import is_down_set, proper_projection_total
from .oracle_service import OracleService
from .progression_service import ProgressionService
from .sumset_service import (
    GRID_CELL_LIMIT,
    affine_dimension,
    grid_encode,
    grid_offset,
    iterated_sum,
    minkowski_sum,
    sum_grid_shape,
    unit_cube,
)

logger = logging.getLogger(__name__)


def _product(values) -> int:
    p = 1
    for v in values:
        p *= v
    return p


class VerificationService:
    """Exact checkers for the sumset inequalities; each returns a VerificationReport."""

    def __init__(self,
                 progressions: ProgressionService,
                 oracles: OracleService,
                 max_subset: int = 18,
                 backend: str = "auto"):
        """
        Initialize verification service.

        Args:
            progressions: Supplies Freiman dimension
            oracles: Supplies parallelepiped search
            max_subset: Largest |A| for which all subsets of A are enumerated
            backend: Sumset backend
        """
        self.progressions = progressions
        self.oracles = oracles
        self.max_subset = max_subset
        self.backend = backend

    def _sum(self, A: PointSet, B: PointSet) -> PointSet:
        return minkowski_sum(A, B, backend=self.backend)

    def verify_box_doubling(self, A: PointSet, box: Box) -> VerificationReport:
        """|A+A| >= 2^d|A| + prod(2L_i - 1) - prod(2L_i) for A inside the box."""
        A.require_nonempty()
        if not box.contains(A):
            raise InputError(f"The set is not contained in the box {list(box.lengths)}")
        d = box.dim
        lhs = len(self._sum(A, A))
        rhs = 2 ** d * len(A) + _product(2 * L - 1 for L in box.lengths) - _product(2 * L for L in box.lengths)
        return VerificationReport.compare(
            "box-doubling",
            lhs,
            ">=",
            rhs,
            parameters={"d": d, "lengths": list(box.lengths), "size": len(A), "equality": lhs == rhs},
            witness=A,
        )

    def verify_cube_doubling(self, A: PointSet, k: int) -> VerificationReport:
        """|A+A| >= 2^d|A| - d(2k)^(d-1) for A inside the cube [k]^d."""
        A.require_nonempty()
        d = A.ambient_dim
        if k < 1 or not Box((k,) * d).contains(A):
            raise InputError(f"The set is not contained in the cube [{k}]^{d}")
        lhs = len(self._sum(A, A))
        rhs = 2 ** d * len(A) - d * (2 * k) ** (d - 1)
        return VerificationReport.compare(
            "cube-doubling", lhs, ">=", rhs,
            parameters={"d": d, "k": k, "size": len(A)},
            witness=A,
        )

    def verify_discrete_bm(self, X: PointSet, Y: PointSet, d: int) -> VerificationReport:
        """|X + Y + {0,1}^d| >= 2^d min(|X|, |Y|), the cube sitting in the first d coordinates."""
        X.require_same_dim(Y)
        X.require_nonempty("first set")
        Y.require_nonempty("second set")
        m = X.ambient_dim
        if not 0 <= d <= m:
            raise InputError(f"d must lie in 0..{m}, got {d}")
        lhs = len(iterated_sum([X, Y, unit_cube(d, m)], backend=self.backend))
        rhs = 2 ** d * min(len(X), len(Y))
        return VerificationReport.compare(
            "discrete-brunn-minkowski", lhs, ">=", rhs,
            parameters={"d": d, "m": m, "size_x": len(X), "size_y": len(Y), "equality": lhs == rhs},
        )

    def verify_compressed_sum_bound(self, A: PointSet, B: PointSet,
                                    X: PointSet, Y: PointSet) -> VerificationReport:
        """
        |A+B| >= 2^d min(|A|,|B|) - sum over proper I of |pi_I(X+Y)|.

        X and Y must be down-sets containing A and B. With A = X and B = Y this
        is the down-set form of the bound.
        """
        for S, name in ((A, "A"), (B, "B"), (X, "X"), (Y, "Y")):
            S.require_nonempty(name)
        A.require_same_dim(X)
        B.require_same_dim(Y)
        X.require_same_dim(Y)
        if not is_down_set(X) or not is_down_set(Y):
            raise InputError("X and Y must be down-sets")
        if not A.issubset(X) or not B.issubset(Y):
            raise InputError("Need A inside X and B inside Y")
        d = X.ambient_dim
        lhs = len(self._sum(A, B))
        projections = proper_projection_total(self._sum(X, Y))
        rhs = 2 ** d * min(len(A), len(B)) - projections
        return VerificationReport.compare(
            "compressed-sum-bound", lhs, ">=", rhs,
            parameters={
                "d": d,
                "size_a": len(A),
                "size_b": len(B),
                "projection_total": projections,
                "down_set_case": A == X and B == Y,
            },
        )

    def verify_freiman_lemma(self, A: PointSet, epsilon: Fraction) -> VerificationReport:
        """
        |A+A| >= (d+1)|A| - d(d+1)/2 with d the Freiman dimension.

        The consequence d <= floor(K - 1 + epsilon) needs |A| >= CK^2/epsilon
        with an unspecified C, so it is recorded but never part of the verdict.
        """
        epsilon = Fraction(epsilon)
        if epsilon <= 0:
            raise InputError(f"epsilon must be positive, got {epsilon}")
        if len(A) < 2:
            raise InputError("Freiman's lemma needs at least two points")
        d = self.progressions.freiman_dimension(A)
        sumset = len(self._sum(A, A))
        K = Fraction(sumset, len(A))
        rhs = (d + 1) * len(A) - d * (d + 1) // 2
        strong_bound = floor(K - 1 + epsilon)
        return VerificationReport.compare(
            "freiman-lemma", sumset, ">=", rhs,
            parameters={
                "d": d,
                "K": K,
                "epsilon": epsilon,
                "strong_dim_bound": strong_bound,
                "strong_dim_bound_holds": d <= strong_bound,
                "equality": sumset == rhs,
            },
            witness=A,
        )

    def verify_simplex_freiman_lemma(self, A: PointSet) -> VerificationReport:
        """Freiman's lemma with d the affine dimension (A contains a non-degenerate d-simplex)."""
        A.require_nonempty()
        d = affine_dimension(A)
        sumset = len(self._sum(A, A))
        rhs = (d + 1) * len(A) - d * (d + 1) // 2
        return VerificationReport.compare(
            "simplex-freiman-lemma", sumset, ">=", rhs,
            parameters={"d": d, "size": len(A), "equality": sumset == rhs},
            witness=A,
        )

    def verify_parallelepiped_doubling(self, A: PointSet) -> VerificationReport:
        """
        |A+A| >= 2^(d/2)|A| for the largest non-degenerate d-parallelepiped in A.

        Compared in squared form. When A is small enough for subset
        enumeration, the chain 2^d <= min_B |B+A+A|/|B| <= sigma[A]^2 from the
        proof is checked as well.
        """
        A.require_nonempty()
        d = self.oracles.max_parallelepiped_dimension(A)
        sumset = len(self._sum(A, A))
        lhs = sumset ** 2
        rhs = 2 ** d * len(A) ** 2
        parameters = {"d": d, "size": len(A), "sumset_size": sumset, "K": Fraction(sumset, len(A))}
        chain_ok = True
        if d > 0:
            parameters["parallelepiped"] = self.oracles.find_parallelepiped(A, d).to_dict()
        if len(A) <= self.max_subset:
            _, ratio, plunnecke = self.plunnecke_witness(A)
            chain_ok = plunnecke.passed and ratio >= 2 ** d
            parameters["plunnecke_ratio"] = ratio
            parameters["plunnecke_chain"] = chain_ok
        return VerificationReport.compare(
            "parallelepiped-doubling", lhs, ">=", rhs,
            parameters=parameters,
            witness=A,
            extra_checks=chain_ok,
        )

    def plunnecke_witness(self, A: PointSet) -> Tuple[PointSet, Fraction, VerificationReport]:
        """
        Minimize |B + A + A| / |B| over all non-empty B inside A.

        Sums B + (A+A) are built subset by subset as unions of shifted bit
        grids, so each subset costs one OR of the previous union.

        Returns:
            (minimizing B, its ratio, report checking ratio <= sigma[A]^2)
        """
        A.require_nonempty()
        n = len(A)
        if n > self.max_subset:
            raise BudgetExceededError("max_subset", n, self.max_subset)
        points = A.sorted_points()
        S = self._sum(A, A)
        sigma = Fraction(len(S), n)

        origin, lengths = sum_grid_shape(A, S)
        if _product(lengths) <= GRID_CELL_LIMIT:
            best_mask, best_sum = self._plunnecke_grid(points, A, S, lengths)
        else:
            best_mask, best_sum = self._plunnecke_direct(points, S)

        B = PointSet(A.ambient_dim, frozenset(points[k] for k in range(n) if best_mask >> k & 1))
        ratio = Fraction(best_sum, len(B))
        report = VerificationReport.compare(
            "plunnecke-witness", ratio, "<=", sigma ** 2,
            parameters={"sigma": sigma, "subset_size": len(B), "sum_size": best_sum, "subsets": 2 ** n - 1},
            witness=B,
        )
        return B, ratio, report

    def _plunnecke_grid(self, points, A: PointSet, S: PointSet, lengths) -> Tuple[int, int]:
        lo_a, _ = A.bounds()
        lo_s, _ = S.bounds()
        s_bits = grid_encode(S.points, lo_s, lengths)
        shifted = [s_bits << grid_offset(p, lo_a, lengths) for p in points]
        n = len(points)
        best_mask, best_sum, best_size = 0, 0, 0

        # Depth-first over subsets: only the unions on the current chain stay alive.
        # Ties go to the smallest mask, matching the direct scan.
        def visit(start: int, mask: int, size: int, union: int) -> None:
            nonlocal best_mask, best_sum, best_size
            for k in range(start, n):
                child_mask = mask | 1 << k
                child = union | shifted[k]
                total = child.bit_count()
                lhs, rhs = total * best_size, best_sum * (size + 1)
                if best_size == 0 or lhs < rhs or (lhs == rhs and child_mask < best_mask):
                    best_mask, best_sum, best_size = child_mask, total, size + 1
                visit(k + 1, child_mask, size + 1, child)

        visit(0, 0, 0, 0)
        return best_mask, best_sum

    def _plunnecke_direct(self, points, S: PointSet) -> Tuple[int, int]:
        best_mask, best_sum, best_size = 0, 0, 0
        for mask in range(1, 1 << len(points)):
            B = PointSet(S.ambient_dim, frozenset(p for k, p in enumerate(points) if mask >> k & 1))
            total = len(self._sum(B, S))
            size = len(B)
            if best_size == 0 or total * best_size < best_sum * size:
                best_mask, best_sum, best_size = mask, total, size
        return best_mask, best_sum
