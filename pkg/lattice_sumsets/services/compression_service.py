"""Down-sets and coordinate compressions in N_0^d."""
import logging
from collections import Counter
from itertools import combinations

from ..exceptions import InputError
from ..models import PointSet, VerificationReport
from .sumset_service import difference_set, minkowski_sum, project, unit_cube

logger = logging.getLogger(__name__)


def _check_axis(B: PointSet, i: int):
    if not isinstance(i, int) or not 1 <= i <= B.ambient_dim:
        raise InputError(f"Axis {i} out of range 1..{B.ambient_dim}")


def is_i_down_set(B: PointSet, i: int) -> bool:
    """True iff lowering coordinate ``i`` (1-based) of any point of B stays inside B."""
    B.require_nonnegative()
    _check_axis(B, i)
    k = i - 1
    for p in B.points:
        # Closure under a single step down implies closure under every step.
        if p[k] > 0 and p[:k] + (p[k] - 1,) + p[k + 1:] not in B.points:
            return False
    return True


def is_down_set(B: PointSet) -> bool:
    B.require_nonnegative()
    return all(is_i_down_set(B, i) for i in range(1, B.ambient_dim + 1))


def compress(A: PointSet, i: int) -> PointSet:
    """
    The i-compression C_i(A).

    Points are grouped into fibres along axis ``i`` (all other coordinates
    fixed); a fibre with n points is replaced by coordinates 0..n-1 on that axis.
    """
    A.require_nonnegative()
    _check_axis(A, i)
    k = i - 1
    counts = Counter(p[:k] + (0,) + p[k + 1:] for p in A.points)
    compressed = frozenset(
        key[:k] + (t,) + key[k + 1:] for key, n in counts.items() for t in range(n)
    )
    return PointSet(A.ambient_dim, compressed)


def down_closure(A: PointSet) -> PointSet:
    """C_d(...C_1(A)...): a down-set with the same cardinality as A."""
    A.require_nonnegative()
    result = A
    for i in range(1, A.ambient_dim + 1):
        result = compress(result, i)
    return result


def proper_projection_total(S: PointSet) -> int:
    """Sum of |pi_I(S)| over all proper subsets I of the axes."""
    d = S.ambient_dim
    axes = range(1, d + 1)
    return sum(len(project(S, I)) for r in range(d) for I in combinations(axes, r))


def cube_sum_identity(X: PointSet) -> VerificationReport:
    """Check |X + {0,1}^d| = |X - {0,1}^d| = sum over all I of |pi_I(X)| for a down-set X."""
    X.require_nonempty()
    if not is_down_set(X):
        raise InputError("cube_sum_identity needs a down-set")
    d = X.ambient_dim
    cube = unit_cube(d)
    plus = len(minkowski_sum(X, cube))
    minus = len(difference_set(X, cube))
    projections = proper_projection_total(X) + len(X)
    report = VerificationReport.compare(
        "cube-sum-identity",
        plus,
        "==",
        projections,
        parameters={"d": d, "size": len(X), "difference_size": minus},
        witness=X,
        extra_checks=(minus == plus),
    )
    if not report.passed:
        logger.error(f"Projection identity failed on a down-set of size {len(X)}: "
                     f"{plus} / {minus} / {projections}")
    return report
