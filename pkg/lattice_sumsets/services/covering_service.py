import logging
from collections import defaultdict
from fractions import Fraction
from itertools import product
from typing import List, Optional, Tuple

from ..exceptions import InputError, TheoremViolation
from ..models import Box, Cover, LatticePoint, PointSet, Progression, VerificationReport
from .progression_service import ProgressionService
from .sumset_service import doubling_constant, minkowski_sum

logger = logging.getLogger(__name__)

BOUNDING_BOX = "bounding-box"
SUPPLIED = "supplied"


def floor_log2_plus(K: Fraction, epsilon: Fraction) -> int:
    """
    The largest integer n with 2^n <= 2^epsilon * K, i.e. floor(log2 K + epsilon).

    With epsilon = p/q and K = r/s the test is 2^(nq - p) * s^q <= r^q, so
    only integers are compared.
    """
    K = Fraction(K)
    epsilon = Fraction(epsilon)
    if K < 1:
        raise InputError(f"K must be at least 1, got {K}")
    if epsilon < 0:
        raise InputError(f"epsilon must be non-negative, got {epsilon}")
    p, q = epsilon.numerator, epsilon.denominator
    r_q, s_q = K.numerator ** q, K.denominator ** q

    def holds(n: int) -> bool:
        e = n * q - p
        if e >= 0:
            return s_q << e <= r_q
        return s_q <= r_q << -e

    n = 0
    while holds(n + 1):
        n += 1
    return n


def _product(values) -> int:
    p = 1
    for v in values:
        p *= v
    return p


class CoveringService:
    """Fibre decomposition, box covering and the low-dimensional covering pipeline."""

    def __init__(self, progressions: ProgressionService, backend: str = "auto"):
        """
        Initialize covering service.

        Args:
            progressions: Provides the box isomorphism and container fallback
            backend: Sumset backend
        """
        self.progressions = progressions
        self.backend = backend

    def _check_split(self, phiA: PointSet, box: Box, l: int):
        if not box.is_sorted_descending():
            raise InputError(f"Box sides must be sorted in decreasing order, got {list(box.lengths)}")
        if not 0 <= l + 1 <= box.dim:
            raise InputError(f"Need 0 <= l+1 <= {box.dim}, got l={l}")
        if not box.contains(phiA):
            raise InputError("The set is not contained in the box")

    def fibre_decomposition(self, phiA: PointSet, box: Box, l: int) -> List[Tuple[LatticePoint, PointSet]]:
        """
        Split phiA by its trailing coordinates x in [L_{l+2}] x ... x [L_d].

        Each fibre keeps its full coordinates; empty fibres are omitted and
        fibres come in increasing order of x.
        """
        self._check_split(phiA, box, l)
        groups = defaultdict(set)
        for p in phiA.points:
            groups[p[l + 1:]].add(p)
        return [(x, PointSet(phiA.ambient_dim, frozenset(groups[x]))) for x in sorted(groups)]

    def verify_fibre_inequality(self, phiA: PointSet, box: Box, l: int) -> VerificationReport:
        """
        Check the fibre argument behind the covering bound.

        (i) the fibre self-sums are pairwise disjoint, (ii) their sizes add up
        to at most |phiA + phiA|, (iii) every fibre satisfies the box-doubling
        bound with the coarse remainder d 2^d L_1...L_l (and with the exact
        remainder), and (iv) |phiA + phiA| >= 2^(l+1)|phiA| - d 2^d L_1...L_l L_(l+2)...L_d.
        """
        phiA.require_nonempty()
        fibres = self.fibre_decomposition(phiA, box, l)
        d = box.dim
        lengths = box.lengths
        lead = lengths[:l] if l > 0 else ()
        head = lengths[:l + 1]
        coarse = d * 2 ** d * _product(lead)
        exact = _product(2 * L for L in head) - _product(2 * L - 1 for L in head)

        total = minkowski_sum(phiA, phiA, backend=self.backend)
        seen = set()
        disjoint = True
        fibre_sum_total = 0
        coarse_ok = exact_ok = True
        for _, F in fibres:
            FF = minkowski_sum(F, F, backend=self.backend).points
            fibre_sum_total += len(FF)
            if seen & FF:
                disjoint = False
            seen |= FF
            coarse_ok &= len(FF) >= 2 ** (l + 1) * len(F) - coarse
            exact_ok &= len(FF) >= 2 ** (l + 1) * len(F) - exact

        remainder = d * 2 ** d * _product(lead) * _product(lengths[l + 1:])
        rhs = 2 ** (l + 1) * len(phiA) - remainder
        report = VerificationReport.compare(
            "fibre-inequality", len(total), ">=", rhs,
            parameters={
                "l": l,
                "d": d,
                "lengths": list(lengths),
                "fibres": len(fibres),
                "fibre_sum_total": fibre_sum_total,
                "disjoint": disjoint,
                "fibre_sums_bounded": fibre_sum_total <= len(total),
                "coarse_remainder": coarse,
                "exact_remainder": exact,
                "coarse_fibre_bounds": coarse_ok,
                "exact_fibre_bounds": exact_ok,
            },
            extra_checks=disjoint and fibre_sum_total <= len(total) and coarse_ok and exact_ok,
        )
        if not report.passed:
            logger.error(f"Fibre inequality failed for l={l} on a set of size {len(phiA)}")
        return report

    def cover_box(self, box: Box, l: int) -> List[LatticePoint]:
        """Offsets {0}^l x [L_(l+1)] x ... x [L_d]; their translates of [L_1] x ... x [L_l] tile the box."""
        if not 0 <= l <= box.dim:
            raise InputError(f"Need 0 <= l <= {box.dim}, got l={l}")
        zeros = (0,) * l
        return [zeros + tail for tail in product(*(range(L) for L in box.lengths[l:]))]

    def _trim(self, base: List[int], offsets: List[LatticePoint], limit: int) -> Tuple[List[int], List[LatticePoint]]:
        # Halve the longest side (first one on ties) until the volume fits.
        while _product(base) > limit:
            k = max(range(len(base)), key=lambda idx: (base[idx], -idx))
            half = (base[k] + 1) // 2
            shifted = [o[:k] + (o[k] + half,) + o[k + 1:] for o in offsets]
            offsets = sorted(set(offsets) | set(shifted))
            base[k] = half
        return base, offsets

    def freiman_bilu_cover(self, A: PointSet, P: Optional[Progression],
                           epsilon: Fraction) -> Tuple[Cover, VerificationReport]:
        """
        Cover A by translates of a progression of dimension at most floor(log2 K + epsilon).

        Args:
            A: The set to cover
            P: A 2-proper progression containing A; the bounding-box
                progression of A is used when omitted
            epsilon: Rational in (0, 1]

        Returns:
            (cover, report) where the report checks the dimension and size
            bounds; the cover's ``checks`` hold every intermediate report
        """
        epsilon = Fraction(epsilon)
        if not 0 < epsilon <= 1:
            raise InputError(f"epsilon must lie in (0, 1], got {epsilon}")
        A.require_nonempty()
        container = SUPPLIED
        if P is None:
            logger.warning("No 2-proper container supplied; falling back to the bounding-box progression")
            P = self.progressions.bounding_box_progression(A)
            container = BOUNDING_BOX

        K = doubling_constant(A, backend=self.backend)
        l = floor_log2_plus(K, epsilon)
        phiA = self.progressions.box_isomorphism(P, A)
        d = P.dim
        order = sorted(range(d), key=lambda k: (-P.lengths[k], k))
        phi_sorted = phiA.permute_axes(order)
        P_sorted = P.reordered(order)
        box = Box(P_sorted.lengths)
        dim = min(l, d)
        logger.info(f"K={K}, l={l}, container dimension {d}, sides {list(box.lengths)}")

        checks = []
        parameters = {
            "K": K,
            "epsilon": epsilon,
            "l": l,
            "container": container,
            "container_dimension": d,
            "sorted_lengths": list(box.lengths),
        }
        if l < d:
            checks.append(self.verify_fibre_inequality(phi_sorted, box, l))
            remainder = d * 2 ** d * _product(box.lengths[:l]) * _product(box.lengths[l + 1:])
            checks.append(VerificationReport.compare(
                "fibre-remainder-lower-bound", epsilon * len(A) / 2, "<=", remainder,
                parameters={"l": l, "d": d, "next_length": box.lengths[l]},
            ))
            # The size of L_(l+1) is bounded only up to an unspecified constant; it is data.
            parameters["next_length"] = box.lengths[l]

        box_offsets = self.cover_box(box, dim)
        parameters["box_translates"] = len(box_offsets)
        base, offsets = self._trim(list(box.lengths[:dim]), box_offsets, len(A))

        def covers(o: LatticePoint, p: LatticePoint) -> bool:
            return all(0 <= p[k] - o[k] < base[k] for k in range(dim)) and p[dim:] == o[dim:]

        phi_points = phi_sorted.sorted_points()
        used = [o for o in offsets if any(covers(o, p) for p in phi_points)]

        gens = P_sorted.generators
        base_progression = Progression(P.base, gens[:dim], tuple(base))
        translates = sorted(
            tuple(sum(o[k] * g[c] for k, g in enumerate(gens)) for c in range(P.ambient_dim))
            for o in used
        )
        cover = Cover(base_progression, tuple(translates), A, parameters, checks)
        self._check_cover(cover)

        report = VerificationReport.compare(
            "freiman-bilu-cover", base_progression.dim, "<=", l,
            parameters={
                "count": cover.count,
                "base_size": base_progression.size(),
                "set_size": len(A),
                "size_bounded": base_progression.size() <= len(A),
            },
            extra_checks=base_progression.size() <= len(A),
        )
        cover.checks.append(report)
        logger.info(f"Covered {len(A)} points by {cover.count} translate(s) of a "
                    f"{base_progression.dim}-dimensional progression of size {base_progression.size()}")
        return cover, report

    def _check_cover(self, cover: Cover):
        base_points = self.progressions.enumerate(cover.base).points
        for a in cover.covered.sorted_points():
            if not any(tuple(x - y for x, y in zip(a, off)) in base_points for off in cover.offsets):
                raise TheoremViolation("cover-soundness", f"point {a} is not covered", witness=cover.covered)
