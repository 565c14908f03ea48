from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Dict, List, Optional, Tuple, Union

from ..exceptions import InputError
from .point_set import LatticePoint, PointSet
from .progression import Progression

Exact = Union[int, Fraction]

PASS = "pass"
FAIL = "fail"

_RELATIONS = {
    ">=": lambda a, b: a >= b,
    "<=": lambda a, b: a <= b,
    "==": lambda a, b: a == b,
}


def render_exact(value: Exact) -> str:
    """Decimal string for an integer, ``p/q`` for a proper fraction."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return str(int(value))


def parse_exact(text: str) -> Exact:
    if "/" in text:
        return Fraction(text)
    return int(text)


def to_json_value(value: Any) -> Any:
    """Convert parameter values to JSON-compatible data, keeping integers exact."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return render_exact(value)
    if isinstance(value, PointSet):
        return value.to_lists()
    if isinstance(value, Progression):
        return progression_to_dict(value)
    if isinstance(value, dict):
        return {str(k): to_json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_json_value(v) for v in value]
    raise InputError(f"Cannot serialize parameter value {value!r}")


def progression_to_dict(p: Progression) -> Dict[str, Any]:
    return {
        "base": list(p.base),
        "generators": [list(g) for g in p.generators],
        "lengths": list(p.lengths),
    }


def progression_from_dict(data: Dict[str, Any]) -> Progression:
    return Progression(
        tuple(data["base"]),
        tuple(tuple(g) for g in data["generators"]),
        tuple(data["lengths"]),
    )


@dataclass
class VerificationReport:
    """Outcome of checking one exact (in)equality."""
    statement_id: str
    lhs: Exact
    rhs: Exact
    relation: str
    verdict: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    witness: Optional[PointSet] = None

    @classmethod
    def compare(cls,
                statement_id: str,
                lhs: Exact,
                relation: str,
                rhs: Exact,
                parameters: Optional[Dict[str, Any]] = None,
                witness: Optional[PointSet] = None,
                extra_checks: bool = True) -> "VerificationReport":
        """
        Evaluate ``lhs <relation> rhs`` exactly and build the report.

        Args:
            statement_id: Identifier of the statement being checked
            lhs: Left-hand side, integer or Fraction
            relation: One of ``>=``, ``<=``, ``==``
            rhs: Right-hand side, integer or Fraction
            parameters: Named quantities to record
            witness: Point set exhibiting the instance
            extra_checks: Further conditions that must also hold for a pass

        Returns:
            The report; its verdict is pass iff the comparison and the extra checks hold
        """
        if relation not in _RELATIONS:
            raise InputError(f"Unknown relation {relation!r}")
        holds = _RELATIONS[relation](lhs, rhs) and bool(extra_checks)
        return cls(
            statement_id=statement_id,
            lhs=lhs,
            rhs=rhs,
            relation=relation,
            verdict=PASS if holds else FAIL,
            parameters=dict(parameters or {}),
            witness=witness,
        )

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> Dict[str, Any]:
        parameters = {"relation": self.relation}
        parameters.update({k: to_json_value(v) for k, v in self.parameters.items()})
        return {
            "statement_id": self.statement_id,
            "lhs": render_exact(self.lhs),
            "rhs": render_exact(self.rhs),
            "verdict": self.verdict,
            "parameters": parameters,
            "witness": self.witness.to_lists() if self.witness is not None else None,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "VerificationReport":
        parameters = dict(data.get("parameters", {}))
        relation = parameters.pop("relation", ">=")
        witness = data.get("witness")
        return cls(
            statement_id=data["statement_id"],
            lhs=parse_exact(data["lhs"]),
            rhs=parse_exact(data["rhs"]),
            relation=relation,
            verdict=data["verdict"],
            parameters=parameters,
            witness=PointSet.of(witness) if witness else None,
        )

    def summary_line(self) -> str:
        return (
            f"{self.statement_id}: {render_exact(self.lhs)} {self.relation} "
            f"{render_exact(self.rhs)} [{self.verdict}]"
        )


@dataclass(frozen=True)
class ParallelepipedWitness:
    """Non-degenerate parallelepiped v0 + {0,1}*v1 + ... + {0,1}*vd."""
    v0: LatticePoint
    directions: Tuple[LatticePoint, ...]

    @property
    def dim(self) -> int:
        return len(self.directions)

    def vertices(self) -> PointSet:
        verts = []
        for r in range(self.dim + 1):
            for subset in combinations(self.directions, r):
                point = list(self.v0)
                for v in subset:
                    point = [c + dv for c, dv in zip(point, v)]
                verts.append(tuple(point))
        return PointSet.of(verts, ambient_dim=len(self.v0))

    def to_dict(self) -> Dict[str, Any]:
        return {"v0": list(self.v0), "directions": [list(v) for v in self.directions]}


@dataclass
class Cover:
    """Translates ``base + offset`` jointly covering the input set."""
    base: Progression
    offsets: Tuple[LatticePoint, ...]
    covered: PointSet
    parameters: Dict[str, Any] = field(default_factory=dict)
    checks: List[VerificationReport] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.offsets)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "base": progression_to_dict(self.base),
            "offsets": [list(o) for o in self.offsets],
            "count": self.count,
            "parameters": {k: to_json_value(v) for k, v in self.parameters.items()},
            "checks": [c.to_dict() for c in self.checks],
        }


@dataclass
class SweepSummary:
    """Aggregate of a batch of verifier runs."""
    sweep_id: str
    seed: Optional[int]
    instances: int = 0
    violations: int = 0
    parameters: Dict[str, Any] = field(default_factory=dict)
    failures: List[VerificationReport] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def record(self, report: VerificationReport, keep_failures: int = 5):
        self.instances += 1
        if not report.passed:
            self.violations += 1
            if len(self.failures) < keep_failures:
                self.failures.append(report)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sweep_id": self.sweep_id,
            "seed": self.seed,
            "instances": self.instances,
            "violations": self.violations,
            "parameters": {k: to_json_value(v) for k, v in self.parameters.items()},
            "failures": [f.to_dict() for f in self.failures],
        }
