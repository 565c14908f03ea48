"""Text formats shared by the command line and the tests."""
import json
import re
from fractions import Fraction
from typing import Any, List, Tuple

from ..exceptions import InputError
from ..models import Box, LatticePoint, PointSet, Progression

_RATIONAL = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


def _content_lines(text: str):
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield number, line


def _ints(tokens, number: int):
    try:
        return tuple(int(t) for t in tokens)
    except ValueError:
        raise InputError(f"Line {number}: expected integers, got {' '.join(tokens)!r}")


def parse_point_set(text: str, ambient_dim: int = None) -> PointSet:
    """
    Parse one point per line, coordinates separated by spaces.

    Blank lines and lines starting with ``#`` are ignored. The dimension is
    taken from the first point unless given.
    """
    points = []
    for number, line in _content_lines(text):
        point = _ints(line.split(), number)
        if ambient_dim is None:
            ambient_dim = len(point)
        elif len(point) != ambient_dim:
            raise InputError(f"Line {number}: expected {ambient_dim} coordinates, got {len(point)}")
        points.append(point)
    if ambient_dim is None:
        raise InputError("The point set file contains no points")
    return PointSet(ambient_dim, frozenset(points))


def parse_point_list(text: str) -> List[LatticePoint]:
    """Points in file order, duplicates kept; used where lines are paired up."""
    points = [_ints(line.split(), number) for number, line in _content_lines(text)]
    if not points:
        raise InputError("The point file contains no points")
    if len({len(p) for p in points}) != 1:
        raise InputError("Points of different dimensions in one file")
    return points


def format_point_set(A: PointSet) -> str:
    return "".join(" ".join(str(c) for c in p) + "\n" for p in A.sorted_points())


def parse_progression(text: str) -> Progression:
    """
    Parse ``base <ints>`` followed by zero or more ``gen <ints> len <L>`` lines.
    """
    lines = list(_content_lines(text))
    if not lines:
        raise InputError("The progression file is empty")
    number, first = lines[0]
    tokens = first.split()
    if tokens[0] != "base" or len(tokens) < 2:
        raise InputError(f"Line {number}: expected 'base <ints>'")
    base = _ints(tokens[1:], number)
    generators, lengths = [], []
    for number, line in lines[1:]:
        tokens = line.split()
        if tokens[0] != "gen" or len(tokens) < 4 or tokens[-2] != "len":
            raise InputError(f"Line {number}: expected 'gen <ints> len <L>'")
        generators.append(_ints(tokens[1:-2], number))
        (length,) = _ints(tokens[-1:], number)
        lengths.append(length)
    return Progression(base, tuple(generators), tuple(lengths))


def format_progression(P: Progression) -> str:
    lines = ["base " + " ".join(str(c) for c in P.base)]
    for g, L in zip(P.generators, P.lengths):
        lines.append("gen " + " ".join(str(c) for c in g) + f" len {L}")
    return "\n".join(lines) + "\n"


def read_text(path: str) -> str:
    try:
        with open(path, "r") as f:
            return f.read()
    except OSError as e:
        raise InputError(f"Cannot read {path}: {e.strerror}") from e


def read_point_set(path: str) -> PointSet:
    return parse_point_set(read_text(path))


def read_point_list(path: str) -> List[LatticePoint]:
    return parse_point_list(read_text(path))


def read_progression(path: str) -> Progression:
    return parse_progression(read_text(path))


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` or an integer; decimals are refused so values stay exact."""
    match = _RATIONAL.match(text)
    if not match:
        raise InputError(f"Expected a rational of the form p/q, got {text!r}")
    numerator, denominator = match.group(1), match.group(2) or "1"
    if int(denominator) == 0:
        raise InputError(f"Zero denominator in {text!r}")
    return Fraction(int(numerator), int(denominator))


def parse_int_list(text: str) -> Tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise InputError(f"Expected comma-separated integers, got {text!r}")


def parse_box(text: str) -> Box:
    return Box(parse_int_list(text))


def dumps(data: Any) -> str:
    """JSON with insertion-ordered keys, so equal data always gives equal bytes."""
    return json.dumps(data, indent=2) + "\n"
