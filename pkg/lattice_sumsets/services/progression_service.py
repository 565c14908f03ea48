import logging
from functools import reduce
from math import gcd
from typing import Dict, List, Tuple

from sympy import Matrix, ilcm

from ..exceptions import BudgetExceededError, InputError, TheoremViolation
from ..models import Correspondence, LatticePoint, PointSet, Progression, VerificationReport
from .sumset_service import affine_dimension, integer_rank, minkowski_sum

logger = logging.getLogger(__name__)

DEFAULT_MAX_ENUM = 10 ** 7

Quadruple = Tuple[int, int, int, int]


class ProgressionService:
    """Progressions, properness, the box isomorphism and Freiman dimension."""

    def __init__(self, max_enum: int = DEFAULT_MAX_ENUM, backend: str = "auto"):
        """
        Initialize the progression service.

        Args:
            max_enum: Largest number of points (or quadruple candidates) any
                single enumeration may visit
            backend: Sumset backend passed through to core operations
        """
        self.max_enum = max_enum
        self.backend = backend

    def _check_budget(self, requested: int, budget: str = "max_enum"):
        if requested > self.max_enum:
            raise BudgetExceededError(budget, requested, self.max_enum)

    # Progressions

    def enumerate(self, P: Progression) -> PointSet:
        """All points x0 + sum mu_i x_i with mu_i in [L_i], deduplicated."""
        self._check_budget(P.size())
        return PointSet(P.ambient_dim, frozenset(P.point(mu) for mu in P.coefficients()))

    def is_t_proper(self, P: Progression, t: int) -> bool:
        """True iff the sums over the dilated ranges [t*L_i] are pairwise distinct."""
        if not isinstance(t, int) or t < 1:
            raise InputError(f"t must be a positive integer, got {t}")
        self._check_budget(P.size(t))
        seen = set()
        for mu in P.coefficients(t):
            x = P.point(mu)
            if x in seen:
                logger.debug(f"Collision at {x} for t={t}")
                return False
            seen.add(x)
        return True

    def is_proper(self, P: Progression) -> bool:
        return self.is_t_proper(P, 1)

    def _coordinate_index(self, P: Progression) -> Dict[LatticePoint, Tuple[int, ...]]:
        self._check_budget(P.size())
        return {P.point(mu): mu for mu in P.coefficients()}

    def box_correspondence(self, P: Progression, A: PointSet) -> Correspondence:
        """
        The map phi(x0 + sum mu_i x_i) = (mu_1, ..., mu_d) restricted to A.

        Args:
            P: A 2-proper progression of dimension at least 1
            A: Subset of P

        Returns:
            Correspondence from A to its coefficient tuples
        """
        A.require_nonempty()
        if P.dim < 1:
            raise InputError("The box isomorphism needs a progression of dimension at least 1")
        if P.ambient_dim != A.ambient_dim:
            raise InputError(f"Progression lives in dimension {P.ambient_dim}, set in {A.ambient_dim}")
        if not self.is_t_proper(P, 2):
            raise InputError("The progression is not 2-proper")
        index = self._coordinate_index(P)
        missing = [a for a in A.sorted_points() if a not in index]
        if missing:
            raise InputError(f"{len(missing)} point(s) of the set lie outside the progression, e.g. {missing[0]}")
        return Correspondence(tuple((a, index[a]) for a in A.sorted_points()))

    def box_isomorphism(self, P: Progression, A: PointSet) -> PointSet:
        """phi(A) inside [L_1] x ... x [L_d]; sizes of A and A + A are preserved."""
        phi = self.box_correspondence(P, A)
        image = phi.target
        if len(image) != len(A):
            raise TheoremViolation("box-isomorphism", "phi is not injective on A", witness=A)
        sum_a = len(minkowski_sum(A, A, backend=self.backend))
        sum_phi = len(minkowski_sum(image, image, backend=self.backend))
        if sum_a != sum_phi:
            raise TheoremViolation(
                "box-isomorphism", f"|A+A| = {sum_a} but |phi(A)+phi(A)| = {sum_phi}", witness=A
            )
        return image

    def bounding_box_progression(self, A: PointSet) -> Progression:
        """Coordinate-aligned progression spanning the bounding box of A."""
        lo, hi = A.bounds()
        d = A.ambient_dim
        generators = tuple(tuple(1 if r == k else 0 for r in range(d)) for k in range(d))
        lengths = tuple(h - l + 1 for l, h in zip(lo, hi))
        # Unit generators: every dilate tP is proper.
        return Progression(lo, generators, lengths)

    # Freiman homomorphisms and dimension

    def quadruples(self, points: List[LatticePoint]) -> List[Quadruple]:
        """
        Non-trivial additive quadruples a_i + a_j = a_k + a_l among ``points``.

        Each relation is listed once, with i <= j, k <= l and (i, j) < (k, l).
        """
        n = len(points)
        self._check_budget(n ** 3, "max_enum (quadruples)")
        where = {p: idx for idx, p in enumerate(points)}
        found = []
        for i in range(n):
            for j in range(i, n):
                s = tuple(x + y for x, y in zip(points[i], points[j]))
                for k in range(i, n):
                    rest = tuple(x - y for x, y in zip(s, points[k]))
                    l = where.get(rest)
                    if l is None or l < k or (k, l) <= (i, j):
                        continue
                    found.append((i, j, k, l))
        return found

    def _holds(self, phi: Dict[LatticePoint, LatticePoint], quad: Tuple[LatticePoint, ...]) -> bool:
        a1, a2, a3, a4 = (phi[q] for q in quad)
        return all(x + y == z + w for x, y, z, w in zip(a1, a2, a3, a4))

    def verify_freiman_hom(self, c: Correspondence) -> VerificationReport:
        """
        Check that every additive quadruple of the source maps to one of the image.

        The report also records whether the inverse map is a Freiman
        homomorphism, i.e. whether ``c`` is a Freiman isomorphism.
        """
        forward = c.forward()
        backward = c.inverse().forward()
        source = sorted(forward)
        target = sorted(backward)

        source_quads = [tuple(source[x] for x in q) for q in self.quadruples(source)]
        broken = [q for q in source_quads if not self._holds(forward, q)]
        target_quads = [tuple(target[x] for x in q) for q in self.quadruples(target)]
        broken_inverse = [q for q in target_quads if not self._holds(backward, q)]

        witness = PointSet.of(broken[0]) if broken else None
        return VerificationReport.compare(
            "freiman-homomorphism",
            len(source_quads) - len(broken),
            "==",
            len(source_quads),
            parameters={
                "quadruples": len(source_quads),
                "violations": len(broken),
                "inverse_quadruples": len(target_quads),
                "inverse_violations": len(broken_inverse),
                "isomorphism": not broken and not broken_inverse,
            },
            witness=witness,
        )

    def relation_rows(self, points: List[LatticePoint]) -> List[List[int]]:
        """Rows e_i + e_j - e_k - e_l of the additive-quadruple relation matrix."""
        n = len(points)
        rows = []
        for i, j, k, l in self.quadruples(points):
            row = [0] * n
            row[i] += 1
            row[j] += 1
            row[k] -= 1
            row[l] -= 1
            rows.append(row)
        return rows

    def freiman_dimension(self, A: PointSet) -> int:
        """
        Freiman dimension of A via the universal model.

        The free module on {e_a} modulo all quadruple relations has rank
        |A| - rank(relations); its image is affine, so one is subtracted.
        """
        if len(A) < 2:
            raise InputError("Freiman dimension needs at least two points")
        points = A.sorted_points()
        rank = integer_rank(self.relation_rows(points))
        dim = len(points) - rank - 1
        logger.debug(f"|A|={len(points)}, relation rank={rank}, d_Frei={dim}")
        return dim

    def freiman_model(self, A: PointSet) -> Correspondence:
        """
        A Freiman-isomorphic copy of A in Z^d, d = freiman_dimension(A), of full affine dimension.

        Coordinates are an integer basis of the functionals vanishing on every
        quadruple relation and on the first point, so that point maps to the origin.
        """
        if len(A) < 2:
            raise InputError("The Freiman model needs at least two points")
        points = A.sorted_points()
        n = len(points)
        rows = self.relation_rows(points) + [[1] + [0] * (n - 1)]
        basis = []
        for v in Matrix(rows).nullspace():
            scale = reduce(ilcm, (x.q for x in v), 1)
            ints = [int(x * scale) for x in v]
            g = reduce(gcd, ints, 0) or 1
            basis.append([x // g for x in ints])
        if not basis:
            raise TheoremViolation("freiman-model", "empty functional basis for |A| >= 2", witness=A)
        images = [tuple(f[idx] for f in basis) for idx in range(n)]
        model = Correspondence(tuple(zip(points, images)))
        image_dim = affine_dimension(model.target)
        if image_dim != len(basis):
            raise TheoremViolation(
                "freiman-model", f"model has affine dimension {image_dim}, expected {len(basis)}", witness=A
            )
        return model
