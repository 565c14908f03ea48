import logging
from collections import defaultdict
from fractions import Fraction
from functools import reduce
from itertools import combinations, permutations, product
from math import comb, gcd
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from sympy import ilcm

from ..exceptions import BudgetExceededError, InputError, TheoremViolation
from ..models import Box, Correspondence, LatticePoint, ParallelepipedWitness, PointSet
from .compression_service import compress
from .sumset_service import affine_dimension, box_points, integer_rank, minkowski_sum

logger = logging.getLogger(__name__)


class OracleService:
    """Brute-force searches and explicit constructions used as ground truth."""

    def __init__(self,
                 max_parallelepiped_points: int = 64,
                 max_parallelepiped_dim: int = 4,
                 max_search: int = 2_000_000,
                 max_oracle_nodes: int = 2_000_000,
                 backend: str = "auto"):
        """
        Initialize oracle service.

        Args:
            max_parallelepiped_points: Largest set the parallelepiped search accepts
            max_parallelepiped_dim: Largest parallelepiped dimension searched
            max_search: Largest number of subsets the extremal search enumerates
            max_oracle_nodes: Node budget of the Freiman isomorphism search
            backend: Sumset backend
        """
        self.max_parallelepiped_points = max_parallelepiped_points
        self.max_parallelepiped_dim = max_parallelepiped_dim
        self.max_search = max_search
        self.max_oracle_nodes = max_oracle_nodes
        self.backend = backend

    # Parallelepipeds

    def find_parallelepiped(self, A: PointSet, d: int) -> Optional[ParallelepipedWitness]:
        """
        Lexicographically first non-degenerate d-parallelepiped inside A.

        Base points are tried in increasing order; directions are differences
        a - v0 taken in increasing order of a, so witnesses are canonical. The
        directions keep that order: for {0,1}^3 they come out as e3, e2, e1.
        """
        A.require_nonempty()
        if d < 0:
            raise InputError(f"Parallelepiped dimension must be non-negative, got {d}")
        if len(A) > self.max_parallelepiped_points:
            raise BudgetExceededError("max_parallelepiped_points", len(A), self.max_parallelepiped_points)
        if d > self.max_parallelepiped_dim:
            raise BudgetExceededError("max_parallelepiped_dim", d, self.max_parallelepiped_dim)
        if 2 ** d > len(A) or d > A.ambient_dim:
            return None

        points = A.sorted_points()
        members = A.points

        def extend(vertices: Set[LatticePoint], directions: List[LatticePoint],
                   candidates: List[LatticePoint], start: int) -> Optional[List[LatticePoint]]:
            if len(directions) == d:
                return directions
            for idx in range(start, len(candidates)):
                v = candidates[idx]
                shifted = {tuple(x + y for x, y in zip(p, v)) for p in vertices}
                if not shifted <= members:
                    continue
                if integer_rank(directions + [v]) != len(directions) + 1:
                    continue
                found = extend(vertices | shifted, directions + [v], candidates, idx + 1)
                if found is not None:
                    return found
            return None

        for v0 in points:
            candidates = [tuple(x - y for x, y in zip(a, v0)) for a in points if a != v0]
            found = extend({v0}, [], candidates, 0)
            if found is not None:
                witness = ParallelepipedWitness(v0, tuple(found))
                self._validate_witness(A, witness)
                return witness
        return None

    def _validate_witness(self, A: PointSet, witness: ParallelepipedWitness):
        vertices = witness.vertices()
        if len(vertices) != 2 ** witness.dim or not vertices.issubset(A):
            raise TheoremViolation("parallelepiped-witness", "vertices missing from the set", witness=vertices)
        if integer_rank(list(witness.directions)) != witness.dim:
            raise TheoremViolation("parallelepiped-witness", "directions are dependent", witness=vertices)

    def max_parallelepiped_dimension(self, A: PointSet) -> int:
        """Largest d for which A contains a non-degenerate d-parallelepiped."""
        A.require_nonempty()
        upper = min(affine_dimension(A), len(A).bit_length() - 1)
        best = 0
        for d in range(1, upper + 1):
            if self.find_parallelepiped(A, d) is None:
                break
            best = d
        return best

    # Extremal search

    def _box_symmetries(self, box: Box) -> List[Tuple[Tuple[int, ...], Tuple[bool, ...]]]:
        d = box.dim
        perms = [
            perm for perm in permutations(range(d))
            if all(box.lengths[perm[k]] == box.lengths[k] for k in range(d))
        ]
        return [(perm, flips) for perm in perms for flips in product((False, True), repeat=d)]

    def _canonical(self, subset: Sequence[LatticePoint], box: Box, symmetries) -> Tuple[LatticePoint, ...]:
        best = None
        for perm, flips in symmetries:
            image = []
            for p in subset:
                q = tuple(p[perm[k]] for k in range(box.dim))
                image.append(tuple(box.lengths[k] - 1 - c if flips[k] else c for k, c in enumerate(q)))
            image = tuple(sorted(image))
            if best is None or image < best:
                best = image
        return best

    def min_doubling_search(self, box: Box, n: int) -> Tuple[PointSet, int]:
        """
        Size-n subset of the box with the fewest pairwise sums.

        Only orbit representatives under axis permutations and reflections of
        the box are evaluated; ties go to the lexicographically smallest
        canonical form.

        Returns:
            (minimizer, |A + A|)
        """
        if not 1 <= n <= box.volume:
            raise InputError(f"Subset size must lie in 1..{box.volume}, got {n}")
        total = comb(box.volume, n)
        if total > self.max_search:
            raise BudgetExceededError("max_search", total, self.max_search)
        symmetries = self._box_symmetries(box)
        best_value, best_set = None, None
        for subset in combinations(box_points(box).sorted_points(), n):
            if self._canonical(subset, box, symmetries) != subset:
                continue
            A = PointSet(box.dim, frozenset(subset))
            value = len(minkowski_sum(A, A, backend=self.backend))
            if best_value is None or (value, subset) < (best_value, best_set):
                best_value, best_set = value, subset
        logger.info(f"Minimal doubling search over {total} subsets of {box.lengths}: {best_value}")
        return PointSet(box.dim, frozenset(best_set)), best_value

    # Constructions

    def lacunary_example(self, K: int, m: int) -> PointSet:
        """
        Union of K blocks x_i + {1, ..., m} with x_i = (4Km)^i.

        Block sums x_i + x_j + {2, ..., 2m} are checked to be pairwise disjoint,
        which gives |A + A| = K(K+1)/2 * (2m - 1).
        """
        if K < 1 or m < 1:
            raise InputError(f"K and m must be positive, got K={K}, m={m}")
        M = 4 * K * m
        shifts = [M ** i for i in range(1, K + 1)]
        intervals = sorted(
            (shifts[i] + shifts[j] + 2, shifts[i] + shifts[j] + 2 * m)
            for i in range(K) for j in range(i, K)
        )
        for (_, prev_end), (start, _) in zip(intervals, intervals[1:]):
            if start <= prev_end:
                raise TheoremViolation("lacunary-disjointness", f"block sums overlap at {start}")
        return PointSet(1, frozenset((x + t,) for x in shifts for t in range(1, m + 1)))

    def cube_times_interval(self, d: int, k: int) -> PointSet:
        """{0,1}^(d-1) x [k]."""
        if d < 1 or k < 1:
            raise InputError(f"d and k must be positive, got d={d}, k={k}")
        return PointSet(d, frozenset(
            bits + (t,) for bits in product((0, 1), repeat=d - 1) for t in range(k)
        ))

    def greedy_sidon_set(self, n: int) -> PointSet:
        """First n terms of the greedy Sidon sequence 0, 1, 3, 7, 12, 20, ..."""
        if n < 1:
            raise InputError(f"n must be positive, got {n}")
        terms = [0]
        sums = {0}
        candidate = 1
        while len(terms) < n:
            new_sums = {candidate + t for t in terms} | {2 * candidate}
            if not new_sums & sums and len(new_sums) == len(terms) + 1:
                terms.append(candidate)
                sums |= new_sums
            candidate += 1
        return PointSet.of(terms)

    def find_noncommuting_compressions(self, box: Box, max_size: int) -> Optional[Tuple[PointSet, int, int]]:
        """
        First subset A of the box (by size, then lexicographically) and axes i < j
        with C_i(C_j(A)) != C_j(C_i(A)).
        """
        points = box_points(box).sorted_points()
        visited = 0
        for size in range(1, min(max_size, len(points)) + 1):
            for subset in combinations(points, size):
                visited += 1
                if visited > self.max_search:
                    raise BudgetExceededError("max_search", visited, self.max_search)
                A = PointSet(box.dim, frozenset(subset))
                for i, j in combinations(range(1, box.dim + 1), 2):
                    if compress(compress(A, j), i) != compress(compress(A, i), j):
                        return A, i, j
        return None

    # Freiman isomorphism search

    def _tick(self, nodes: List[int]):
        nodes[0] += 1
        if nodes[0] > self.max_oracle_nodes:
            raise BudgetExceededError("max_oracle_nodes", nodes[0], self.max_oracle_nodes)

    @staticmethod
    def _relations(points: List[LatticePoint]) -> List[Dict[int, int]]:
        """Coefficients of every non-trivial relation a_i + a_j - a_k - a_l = 0."""
        by_sum: Dict[LatticePoint, List[Tuple[int, int]]] = {}
        for i in range(len(points)):
            for j in range(i, len(points)):
                s = tuple(x + y for x, y in zip(points[i], points[j]))
                by_sum.setdefault(s, []).append((i, j))
        relations = []
        for pairs in by_sum.values():
            for (i, j), (k, l) in combinations(pairs, 2):
                coeff: Dict[int, int] = {}
                for idx, sign in ((i, 1), (j, 1), (k, -1), (l, -1)):
                    coeff[idx] = coeff.get(idx, 0) + sign
                relations.append(coeff)
        return relations

    @staticmethod
    def _sum_classes(images: Sequence[Sequence]) -> Set[FrozenSet[Tuple[int, int]]]:
        """Partition of the index pairs i <= j by the value of images[i] + images[j]."""
        classes: Dict[tuple, Set[Tuple[int, int]]] = defaultdict(set)
        for i in range(len(images)):
            for j in range(i, len(images)):
                classes[tuple(x + y for x, y in zip(images[i], images[j]))].add((i, j))
        return {frozenset(c) for c in classes.values()}

    @staticmethod
    def _closure(n: int, relations: List[Dict[int, int]],
                 generators: Tuple[int, ...]) -> Optional[List[Tuple[int, Dict[int, int]]]]:
        """Order in which the relations determine every point from ``generators``, if they do."""
        known = set(generators)
        steps = []
        progress = True
        while progress and len(known) < n:
            progress = False
            for coeff in relations:
                unknown = [p for p in coeff if p not in known]
                if len(unknown) == 1:
                    known.add(unknown[0])
                    steps.append((unknown[0], coeff))
                    progress = True
        return steps if len(known) == n else None

    def _generating_set(self, n: int, relations: List[Dict[int, int]],
                        nodes: List[int]) -> Tuple[Tuple[int, ...], List[Tuple[int, Dict[int, int]]]]:
        # Smallest first; among equal sizes prefer one whose steps never divide.
        for size in range(n):
            fallback = None
            for extra in combinations(range(1, n), size):
                self._tick(nodes)
                steps = self._closure(n, relations, (0,) + extra)
                if steps is None:
                    continue
                if all(abs(coeff[p]) == 1 for p, coeff in steps):
                    return extra, steps
                if fallback is None:
                    fallback = (extra, steps)
            if fallback is not None:
                return fallback
        raise TheoremViolation("freiman-oracle", "the whole set does not generate itself")

    def _eliminate(self, n: int, relations: List[Dict[int, int]], generators: Tuple[int, ...],
                   steps: List[Tuple[int, Dict[int, int]]], nodes: List[int]) -> List[List[Fraction]]:
        """
        Most general images of the points, in coordinates over the free generators.

        Generators start as unit vectors and the closure steps fix every other
        point. Each relation still violated is a linear dependency that any
        Freiman isomorphism imposes on the generator images, so it is divided
        out; at most one coordinate is lost per round.
        """
        u = len(generators)
        images: List[Optional[List[Fraction]]] = [None] * n
        images[0] = [Fraction(0)] * u
        for t, g in enumerate(generators):
            images[g] = [Fraction(int(s == t)) for s in range(u)]
        for p, coeff in steps:
            images[p] = [
                -sum(c * images[q][s] for q, c in coeff.items() if q != p) / coeff[p]
                for s in range(u)
            ]
        while True:
            dim = len(images[0])
            residual = None
            for coeff in relations:
                r = [sum(c * images[q][s] for q, c in coeff.items()) for s in range(dim)]
                if any(r):
                    residual = r
                    break
            if residual is None:
                return images
            self._tick(nodes)
            t = min((s for s in range(dim) if residual[s]), key=lambda s: (abs(residual[s]), s))
            images = [
                [v[s] - v[t] / residual[t] * residual[s] for s in range(dim) if s != t]
                for v in images
            ]

    @staticmethod
    def _reduce_row(row: Sequence[int], echelon: List[Tuple[int, List[Fraction]]]) -> Optional[List[Fraction]]:
        r = [Fraction(x) for x in row]
        for pivot, e in echelon:
            if r[pivot]:
                f = r[pivot] / e[pivot]
                r = [a - f * b for a, b in zip(r, e)]
        return r if any(r) else None

    def _box_witness(self, coords: List[List[Fraction]], radius: int,
                     nodes: List[int]) -> Optional[List[LatticePoint]]:
        """
        Integer images with every free generator inside [-radius, radius]^d.

        Any linearly independent choice of generator images is a Freiman
        isomorphism of the coordinate model, so the search only needs
        independence and integral images for the points already determined.
        """
        d = len(coords[0])
        candidates = sorted(
            (v for v in product(range(-radius, radius + 1), repeat=d) if any(v)),
            key=lambda v: (sum(abs(c) for c in v), v),
        )
        last = [max((s for s, x in enumerate(c) if x), default=-1) for c in coords]
        chosen: List[LatticePoint] = []
        echelon: List[Tuple[int, List[Fraction]]] = []

        def image(c: List[Fraction]) -> List[Fraction]:
            return [sum(c[s] * w[i] for s, w in enumerate(chosen)) for i in range(d)]

        def extend(k: int) -> bool:
            self._tick(nodes)
            if k == d:
                return True
            for w in candidates:
                rest = self._reduce_row(w, echelon)
                if rest is None:
                    continue
                chosen.append(w)
                echelon.append((next(s for s, x in enumerate(rest) if x), rest))
                integral = all(
                    x.denominator == 1 for c, top in zip(coords, last) if top == k for x in image(c)
                )
                if integral and extend(k + 1):
                    return True
                chosen.pop()
                echelon.pop()
            return False

        if not extend(0):
            return None
        return [tuple(int(x) for x in image(c)) for c in coords]

    def freiman_dimension_search(self, A: PointSet, radius: int = 1) -> Tuple[int, Correspondence, bool]:
        """
        Freiman dimension of A from an explicit isomorphism search.

        A smallest generating set is found by brute force: a point is
        determined once a pair-sum relation fixes it from known points. Sending
        the generators to unit vectors and dividing out every relation the
        result still breaks gives the most general isomorphic image, whose
        affine dimension is the Freiman dimension. A second search then places
        the free generators inside [-radius, radius]^d.

        Returns:
            (Freiman dimension, an isomorphism onto a full-dimensional image,
            whether that image came from the radius box rather than from
            scaling the rational model)
        """
        if len(A) < 2:
            raise InputError("The Freiman oracle needs at least two points")
        if radius < 1:
            raise InputError(f"Radius must be positive, got {radius}")
        points = A.sorted_points()
        n = len(points)
        nodes = [0]
        relations = self._relations(points)
        generators, steps = self._generating_set(n, relations, nodes)
        coords = self._eliminate(n, relations, generators, steps, nodes)
        d = len(coords[0])
        source_classes = self._sum_classes(points)
        if d == 0 or self._sum_classes(coords) != source_classes:
            raise TheoremViolation("freiman-oracle", f"coordinate model of dimension {d} is not isomorphic", witness=A)

        images = self._box_witness(coords, radius, nodes)
        in_box = images is not None
        if images is None:
            scale = reduce(ilcm, (x.denominator for c in coords for x in c), 1)
            ints = [[int(x * scale) for x in c] for c in coords]
            g = reduce(gcd, (x for c in ints for x in c), 0) or 1
            images = [tuple(x // g for x in c) for c in ints]
        if self._sum_classes(images) != source_classes:
            raise TheoremViolation("freiman-oracle", "integer image is not isomorphic", witness=A)
        logger.debug(
            f"Freiman oracle on {n} points: {len(generators)} generators, d = {d}, "
            f"in box {in_box} ({nodes[0]} nodes)"
        )
        return d, Correspondence(tuple(zip(points, images))), in_box
