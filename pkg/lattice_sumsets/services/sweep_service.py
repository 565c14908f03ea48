import logging
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Optional, Union

from ..exceptions import BudgetExceededError, InputError
from ..models import Box, PointSet, SweepSummary, VerificationReport
from ..utils.random_sets import GENERATOR_NAME, make_rng, random_points, random_subset
from .compression_service import compress, cube_sum_identity, down_closure, is_down_set, is_i_down_set
from .oracle_service import OracleService
from .progression_service import ProgressionService
from .sumset_service import affine_dimension, box_points, minkowski_sum, unit_cube
from .verification_service import VerificationService

logger = logging.getLogger(__name__)

# The Freiman oracle runs on every set up to this size.
ORACLE_MAX_SIZE = 8

Task = Callable[[], Union[VerificationReport, List[VerificationReport]]]


def all_subsets(box: Box) -> List[PointSet]:
    """Every non-empty subset of the box, by increasing bitmask over the sorted points."""
    points = box_points(box).sorted_points()
    return [
        PointSet(box.dim, frozenset(p for k, p in enumerate(points) if mask >> k & 1))
        for mask in range(1, 1 << len(points))
    ]


def all_boxes(max_side: int, max_dim: int) -> List[Box]:
    return [
        Box(lengths)
        for d in range(1, max_dim + 1)
        for lengths in product(range(1, max_side + 1), repeat=d)
    ]


class SweepService:
    """Named batches of verifier runs with deterministic aggregation."""

    def __init__(self,
                 verifier: VerificationService,
                 progressions: ProgressionService,
                 oracles: OracleService,
                 threads: int = 4,
                 seed: int = 0,
                 backend: str = "auto"):
        """
        Initialize sweep service.

        Args:
            verifier: Inequality checkers
            progressions: Freiman dimension and models
            oracles: Brute-force searches and constructions
            threads: Worker cap; never changes results
            seed: Default seed for random sweeps
            backend: Sumset backend
        """
        self.verifier = verifier
        self.progressions = progressions
        self.oracles = oracles
        self.threads = max(1, threads)
        self.seed = seed
        self.backend = backend
        self.sweeps: Dict[str, Callable[..., List[Task]]] = {
            "box-doubling-exhaustive-3x3": self._box_doubling_3x3,
            "box-doubling-exhaustive-2x2x2x2": self._box_doubling_2x2x2x2,
            "box-doubling-full-boxes": self._box_doubling_full_boxes,
            "compression-property": self._compression_property,
            "down-closure": self._down_closure,
            "cube-sum-identity": self._cube_sum_identity,
            "compressed-sum-bound-3x3": self._compressed_sum_bound,
            "discrete-bm": self._discrete_bm,
            "discrete-bm-sharpness": self._discrete_bm_sharpness,
            "plunnecke": self._plunnecke,
            "parallelepiped-cubes": self._parallelepiped_cubes,
            "freiman-lemma": self._freiman_lemma,
            "lacunary": self._lacunary,
        }

    def names(self) -> List[str]:
        return sorted(self.sweeps)

    def run(self, sweep_id: str, seed: Optional[int] = None, trials: Optional[int] = None,
            max_size: Optional[int] = None) -> SweepSummary:
        """
        Run a named sweep.

        Args:
            sweep_id: One of ``names()``
            seed: Seed for random instances (service default when omitted)
            trials: Number of random instances, where the sweep is random
            max_size: Largest random set size, where the sweep uses one

        Returns:
            SweepSummary with instance and violation counts
        """
        if sweep_id not in self.sweeps:
            raise InputError(f"Unknown sweep '{sweep_id}'; available: {', '.join(self.names())}")
        seed = self.seed if seed is None else seed
        summary = SweepSummary(sweep_id=sweep_id, seed=seed)
        summary.parameters["generator"] = GENERATOR_NAME
        tasks = self.sweeps[sweep_id](summary, seed=seed, trials=trials, max_size=max_size)
        logger.info(f"Sweep {sweep_id}: {len(tasks)} task(s), seed {seed}, {self.threads} thread(s)")

        # map() yields in submission order, so aggregation ignores scheduling.
        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            for outcome in executor.map(lambda task: task(), tasks):
                for report in outcome if isinstance(outcome, list) else [outcome]:
                    summary.record(report)
        if summary.violations:
            logger.error(f"Sweep {sweep_id}: {summary.violations} violation(s) in {summary.instances} instance(s)")
        else:
            logger.info(f"Sweep {sweep_id}: {summary.instances} instance(s), no violations")
        return summary

    # Box doubling

    def _box_doubling_tasks(self, box: Box) -> List[Task]:
        return [lambda A=A: self.verifier.verify_box_doubling(A, box) for A in all_subsets(box)]

    def _box_doubling_3x3(self, summary: SweepSummary, **_) -> List[Task]:
        summary.parameters["box"] = [3, 3]
        return self._box_doubling_tasks(Box((3, 3)))

    def _box_doubling_2x2x2x2(self, summary: SweepSummary, **_) -> List[Task]:
        summary.parameters["box"] = [2, 2, 2, 2]
        return self._box_doubling_tasks(Box((2, 2, 2, 2)))

    def _box_doubling_full_boxes(self, summary: SweepSummary, **_) -> List[Task]:
        summary.parameters.update({"max_side": 4, "max_dim": 3})

        def check(box: Box) -> VerificationReport:
            report = self.verifier.verify_box_doubling(box_points(box), box)
            return VerificationReport.compare(
                "box-doubling-equality", report.lhs, "==", report.rhs,
                parameters={"lengths": list(box.lengths)},
            )

        return [lambda box=box: check(box) for box in all_boxes(4, 3)]

    # Compressions

    def _compression_property(self, summary: SweepSummary, seed: int, trials: Optional[int], **_) -> List[Task]:
        trials = 10_000 if trials is None else trials
        box = Box((4, 4, 4))
        summary.parameters.update({"trials": trials, "box": list(box.lengths)})
        rng = make_rng(seed)
        pairs = [(random_subset(rng, box), random_subset(rng, box)) for _ in range(trials)]

        def check(A: PointSet, B: PointSet) -> List[VerificationReport]:
            sumset = len(minkowski_sum(A, B, backend=self.backend))
            reports = []
            for i in range(1, box.dim + 1):
                CA, CB = compress(A, i), compress(B, i)
                reports.append(VerificationReport.compare(
                    "compression-property",
                    len(minkowski_sum(CA, CB, backend=self.backend)), "<=", sumset,
                    parameters={"axis": i},
                    witness=A,
                    extra_checks=(
                        len(CA) == len(A) and len(CB) == len(B)
                        and is_i_down_set(CA, i) and compress(CA, i) == CA
                    ),
                ))
            return reports

        return [lambda A=A, B=B: check(A, B) for A, B in pairs]

    def _closure_inputs(self, summary: SweepSummary, seed: int, trials: Optional[int]) -> List[PointSet]:
        trials = 1000 if trials is None else trials
        summary.parameters.update({"exhaustive_box": [3, 3], "random_box": [4, 4, 4], "trials": trials})
        rng = make_rng(seed)
        return all_subsets(Box((3, 3))) + [random_subset(rng, Box((4, 4, 4))) for _ in range(trials)]

    def _down_closure(self, summary: SweepSummary, seed: int, trials: Optional[int], **_) -> List[Task]:
        def check(A: PointSet) -> VerificationReport:
            closure = down_closure(A)
            return VerificationReport.compare(
                "down-closure", len(closure), "==", len(A),
                witness=A,
                extra_checks=is_down_set(closure),
            )

        return [lambda A=A: check(A) for A in self._closure_inputs(summary, seed, trials)]

    def _cube_sum_identity(self, summary: SweepSummary, seed: int, trials: Optional[int], **_) -> List[Task]:
        return [lambda A=A: cube_sum_identity(down_closure(A)) for A in self._closure_inputs(summary, seed, trials)]

    def _compressed_sum_bound(self, summary: SweepSummary, **_) -> List[Task]:
        box = Box((3, 3))
        down_sets = sorted(
            {down_closure(A) for A in all_subsets(box)},
            key=lambda S: (len(S), S.sorted_points()),
        )
        summary.parameters.update({"box": [3, 3], "down_sets": len(down_sets)})
        return [
            lambda X=X, Y=Y: self.verifier.verify_compressed_sum_bound(X, Y, X, Y)
            for X in down_sets for Y in down_sets
        ]

    # Brunn-Minkowski

    def _discrete_bm(self, summary: SweepSummary, seed: int, trials: Optional[int], **_) -> List[Task]:
        trials = 1000 if trials is None else trials
        box = Box((3, 3, 3))
        summary.parameters.update({"trials": trials, "box": list(box.lengths)})
        rng = make_rng(seed)
        pairs = [(random_subset(rng, box), random_subset(rng, box)) for _ in range(trials)]
        return [
            lambda X=X, Y=Y: [self.verifier.verify_discrete_bm(X, Y, d) for d in (1, 2, 3)]
            for X, Y in pairs
        ]

    def _discrete_bm_sharpness(self, summary: SweepSummary, **_) -> List[Task]:
        summary.parameters.update({"max_side": 3, "max_dim": 3})

        def check(k: int, d: int) -> VerificationReport:
            X = box_points(Box((k,) * d))
            report = self.verifier.verify_discrete_bm(X, X, d)
            return VerificationReport.compare(
                "discrete-brunn-minkowski-sharpness", report.lhs, "==", (2 * k) ** d,
                parameters={"k": k, "d": d},
                extra_checks=report.lhs == report.rhs,
            )

        return [lambda k=k, d=d: check(k, d) for k in range(1, 4) for d in range(1, 4)]

    # Doubling in the presence of parallelepipeds

    def _plunnecke(self, summary: SweepSummary, seed: int, trials: Optional[int],
                   max_size: Optional[int], **_) -> List[Task]:
        trials = 200 if trials is None else trials
        max_size = 10 if max_size is None else max_size
        high = 3 * max_size
        summary.parameters.update({"trials": trials, "max_size": max_size, "range": [0, high]})
        rng = make_rng(seed)
        sets = [
            random_points(rng, int(rng.integers(1, max_size + 1)), 1, 0, high)
            for _ in range(trials)
        ]
        return [lambda A=A: self.verifier.plunnecke_witness(A)[2] for A in sets]

    def _parallelepiped_cubes(self, summary: SweepSummary, **_) -> List[Task]:
        summary.parameters["max_dim"] = 4

        def check(d: int) -> List[VerificationReport]:
            A = unit_cube(d)
            sumset = len(minkowski_sum(A, A, backend=self.backend))
            return [
                VerificationReport.compare("cube-doubling-exact", sumset, "==", 3 ** d, parameters={"d": d}),
                self.verifier.verify_parallelepiped_doubling(A),
            ]

        return [lambda d=d: check(d) for d in range(1, 5)]

    # Freiman dimension

    def _freiman_lemma(self, summary: SweepSummary, seed: int, trials: Optional[int],
                       max_size: Optional[int], **_) -> List[Task]:
        trials = 500 if trials is None else trials
        max_size = 8 if max_size is None else max_size
        summary.parameters.update({
            "trials": trials, "max_size": max_size, "coordinates": [0, 4], "oracle_max_size": ORACLE_MAX_SIZE,
        })
        rng = make_rng(seed)
        sets = [
            random_points(rng, int(rng.integers(2, max_size + 1)), 2, 0, 4)
            for _ in range(trials)
        ]
        fixed = [PointSet.of([0, 1, 3])] + [PointSet.of(range(k)) for k in range(2, 8)]

        def check(A: PointSet) -> List[VerificationReport]:
            lemma = self.verifier.verify_freiman_lemma(A, Fraction(1))
            d = lemma.parameters["d"]
            model = self.progressions.freiman_model(A)
            model_ok = (
                self.progressions.verify_freiman_hom(model).parameters["isomorphism"]
                and affine_dimension(model.target) == d
            )
            parameters = {"model_isomorphism": model_ok, "affine_dimension": affine_dimension(A)}
            oracle_d, oracle_ok = d, True
            if len(A) <= ORACLE_MAX_SIZE:
                try:
                    oracle_d, mapping, in_box = self.oracles.freiman_dimension_search(A, radius=1)
                    oracle_ok = (
                        self.progressions.verify_freiman_hom(mapping).parameters["isomorphism"]
                        and affine_dimension(mapping.target) == oracle_d
                    )
                    parameters["oracle_in_box"] = in_box
                except BudgetExceededError as e:
                    oracle_ok = False
                    parameters["oracle_budget_exceeded"] = str(e)
            parameters["oracle_isomorphism"] = oracle_ok
            cross = VerificationReport.compare(
                "freiman-dimension-cross-check", oracle_d, "==", d,
                parameters=parameters,
                witness=A,
                extra_checks=model_ok and oracle_ok and affine_dimension(A) <= d,
            )
            return [lemma, cross]

        return [lambda A=A: check(A) for A in fixed + sets]

    def _lacunary(self, summary: SweepSummary, **_) -> List[Task]:
        summary.parameters.update({"max_K": 4, "max_m": 6, "dimension_max_K": 3})

        def check(K: int, m: int) -> List[VerificationReport]:
            A = self.oracles.lacunary_example(K, m)
            reports = [VerificationReport.compare(
                "lacunary-sumset-size",
                len(minkowski_sum(A, A, backend="hash")), "==", K * (K + 1) * (2 * m - 1) // 2,
                parameters={"K": K, "m": m},
            )]
            if K <= 3 and len(A) >= 2:
                reports.append(VerificationReport.compare(
                    "lacunary-freiman-dimension",
                    self.progressions.freiman_dimension(A), "==", K if m >= 2 else K - 1,
                    parameters={"K": K, "m": m},
                ))
            return reports

        return [lambda K=K, m=m: check(K, m) for K in range(1, 5) for m in range(1, 7)]
