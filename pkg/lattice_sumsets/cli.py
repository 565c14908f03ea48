"""Command-line front end. ``run(argv)`` returns the process exit code."""
import argparse
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional

from .config import LOG_LEVELS, load_config
from .exceptions import EXIT_OK, EXIT_VIOLATION, InputError, LatticeError
from .models import Correspondence, PointSet, VerificationReport, render_exact
from .services.compression_service import compress, cube_sum_identity, down_closure
from .services.sumset_service import BACKENDS, affine_dimension, box_points, project, unit_cube
from .toolkit import LatticeToolkit
from .utils.formats import (
    dumps,
    format_point_set,
    format_progression,
    parse_box,
    parse_int_list,
    parse_rational,
    read_point_list,
    read_point_set,
    read_progression,
)

logger = logging.getLogger(__name__)

VERIFY_KINDS = (
    "box-doubling", "cube-doubling", "discrete-bm", "compressed-sum", "freiman-lemma",
    "simplex-freiman", "parallelepiped", "plunnecke", "freiman-hom", "fibre",
)
SEARCH_KINDS = ("parallelepiped", "max-parallelepiped", "min-doubling", "noncommuting", "freiman-oracle")
EXAMPLE_KINDS = ("lacunary", "cube", "box", "cube-interval", "sidon")


@dataclass
class Outcome:
    """What a subcommand produced: JSON data, its text rendering, and whether every check passed."""
    data: Any
    text: str
    passed: bool = True


def _points_outcome(A: PointSet) -> Outcome:
    return Outcome({"size": len(A), "points": A.to_lists()}, format_point_set(A))


def _report_text(report: VerificationReport) -> str:
    lines = [report.summary_line()]
    for key, value in report.to_dict()["parameters"].items():
        if key != "relation":
            lines.append(f"  {key}: {value}")
    if report.witness is not None:
        lines.append(f"  witness: {len(report.witness)} point(s)")
    return "\n".join(lines) + "\n"


def _report_outcome(report: VerificationReport) -> Outcome:
    return Outcome(report.to_dict(), _report_text(report), report.passed)


def _require(args: argparse.Namespace, *names: str):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n, None) is None]
    if missing:
        raise InputError(f"{args.command} {getattr(args, 'kind', '')}".strip() + f" needs {', '.join(missing)}")


# Core operations

def cmd_sumset(toolkit: LatticeToolkit, args: argparse.Namespace) -> Outcome:
    return _points_outcome(toolkit.sumset(read_point_set(args.a), read_point_set(args.b)))


def cmd_doubling(toolkit: LatticeToolkit, args: argparse.Namespace) -> Outcome:
    A = read_point_set(args.a)
    sigma = toolkit.doubling(A)
    size, sumset = len(A), sigma * len(A)
    data = {"size": size, "sumset_size": int(sumset), "doubling": render_exact(sigma)}
    return Outcome(data, f"|A| = {size}\n|A+A| = {int(sumset)}\nsigma = {render_exact(sigma)}\n")


def cmd_project(toolkit: LatticeToolkit, args: argparse.Namespace) -> Outcome:
    return _points_outcome(project(read_point_set(args.x), parse_int_list(args.axes)))


def cmd_compress(toolkit: LatticeToolkit, args: argparse.Namespace) -> Outcome:
    return _points_outcome(compress(read_point_set(args.a), args.axis))


def cmd_downclose(toolkit: LatticeToolkit, args: argparse.Namespace) -> Outcome:
    return _points_outcome(down_closure(read_point_set(args.a)))


def cmd_identity(toolkit: LatticeToolkit, args: argparse.Namespace) -> Outcome:
    return _report_outcome(cube_sum_identity(read_point_set(args.x)))


def cmd_proper(toolkit: LatticeToolkit, args: argparse.Namespace) -> Outcome:
    P = read_progression(args.prog)
    proper = toolkit.progressions.is_t_proper(P, args.t)
    data = {"t": args.t, "dimension": P.dim, "size": P.size(args.t), "proper": proper}
    return Outcome(data, f"{args.t}-proper: {'yes' if proper else 'no'} (size {P.size(args.t)})\n")


def cmd_phi(toolkit: LatticeToolkit, args: argparse.Namespace) -> Outcome:
    P = read_progression(args.prog)
    return _points_outcome(toolkit.progressions.box_isomorphism(P, read_point_set(args.a)))


def cmd_freiman_dim(toolkit: LatticeToolkit, args: argparse.Namespace) -> Outcome:
    A = read_point_set(args.a)
    d = toolkit.progressions.freiman_dimension(A)
    data = {"size": len(A), "affine_dimension": affine_dimension(A), "freiman_dimension": d}
    text = f"{d}\n"
    if args.model:
        model = toolkit.progressions.freiman_model(A)
        data["model"] = [[list(a), list(b)] for a, b in model.pairs]
        text += "".join(
            " ".join(map(str, a)) + " -> " + " ".join(map(str, b)) + "\n" for a, b in model.pairs
        )
    return Outcome(data, text)


# Verifiers

def cmd_verify(toolkit: LatticeToolkit, args: argparse.Namespace) -> Outcome:
    verifier = toolkit.verifier
    kind = args.kind
    _require(args, "set")
    A = read_point_set(args.set)
    if kind == "box-doubling":
        _require(args, "box")
        return _report_outcome(verifier.verify_box_doubling(A, parse_box(args.box)))
    if kind == "cube-doubling":
        _require(args, "k")
        return _report_outcome(verifier.verify_cube_doubling(A, args.k))
    if kind == "discrete-bm":
        _require(args, "set2", "d")
        return _report_outcome(verifier.verify_discrete_bm(A, read_point_set(args.set2), args.d))
    if kind == "compressed-sum":
        _require(args, "set2")
        B = read_point_set(args.set2)
        X = read_point_set(args.down_x) if args.down_x else A
        Y = read_point_set(args.down_y) if args.down_y else B
        return _report_outcome(verifier.verify_compressed_sum_bound(A, B, X, Y))
    if kind == "freiman-lemma":
        epsilon = parse_rational(args.epsilon) if args.epsilon else Fraction(1)
        return _report_outcome(verifier.verify_freiman_lemma(A, epsilon))
    if kind == "simplex-freiman":
        return _report_outcome(verifier.verify_simplex_freiman_lemma(A))
    if kind == "parallelepiped":
        return _report_outcome(verifier.verify_parallelepiped_doubling(A))
    if kind == "plunnecke":
        return _report_outcome(verifier.plunnecke_witness(A)[2])
    if kind == "freiman-hom":
        _require(args, "image")
        sources, images = read_point_list(args.set), read_point_list(args.image)
        if len(sources) != len(images):
            raise InputError(f"{len(sources)} source points but {len(images)} images")
        c = Correspondence(tuple(sorted(zip(sources, images))))
        return _report_outcome(toolkit.progressions.verify_freiman_hom(c))
    if kind == "fibre":
        _require(args, "box", "l")
        return _report_outcome(toolkit.covering.verify_fibre_inequality(A, parse_box(args.box), args.l))
    raise InputError(f"Unknown verify kind '{kind}'")


def cmd_cover(toolkit: LatticeToolkit, args: argparse.Namespace) -> Outcome:
    A = read_point_set(args.set)
    P = read_progression(args.prog) if args.prog else None
    cover, report = toolkit.cover(A, P, parse_rational(args.epsilon))
    passed = all(check.passed for check in cover.checks)
    lines = [f"count: {cover.count}"]
    for key, value in cover.to_dict()["parameters"].items():
        lines.append(f"{key}: {value}")
    lines.append("base:")
    lines.extend("  " + line for line in format_progression(cover.base).splitlines())
    lines.append("offsets:")
    lines.extend("  " + " ".join(map(str, o)) for o in cover.offsets)
    lines.append("checks:")
    lines.extend("  " + check.summary_line() for check in cover.checks)
    return Outcome(cover.to_dict(), "\n".join(lines) + "\n", passed)


# Oracles

def cmd_search(toolkit: LatticeToolkit, args: argparse.Namespace) -> Outcome:
    oracles = toolkit.oracles
    kind = args.kind
    if kind == "parallelepiped":
        _require(args, "set", "d")
        witness = oracles.find_parallelepiped(read_point_set(args.set), args.d)
        if witness is None:
            return Outcome({"d": args.d, "witness": None}, "none\n")
        text = "v0: " + " ".join(map(str, witness.v0)) + "\n" + "".join(
            f"v{k}: " + " ".join(map(str, v)) + "\n" for k, v in enumerate(witness.directions, 1)
        )
        return Outcome({"d": args.d, "witness": witness.to_dict()}, text)
    if kind == "max-parallelepiped":
        _require(args, "set")
        d = oracles.max_parallelepiped_dimension(read_point_set(args.set))
        return Outcome({"d": d}, f"{d}\n")
    if kind == "min-doubling":
        _require(args, "box", "n")
        A, value = oracles.min_doubling_search(parse_box(args.box), args.n)
        return Outcome({"sumset_size": value, "points": A.to_lists()}, f"|A+A| = {value}\n" + format_point_set(A))
    if kind == "noncommuting":
        _require(args, "box", "max_size")
        found = oracles.find_noncommuting_compressions(parse_box(args.box), args.max_size)
        if found is None:
            return Outcome({"found": False}, "none\n")
        A, i, j = found
        data = {"found": True, "axes": [i, j], "points": A.to_lists()}
        return Outcome(data, f"axes {i} {j}\n" + format_point_set(A))
    if kind == "freiman-oracle":
        _require(args, "set")
        A = read_point_set(args.set)
        d, mapping, in_box = oracles.freiman_dimension_search(A, radius=args.radius)
        data = {
            "dimension": d,
            "radius": args.radius,
            "in_box": in_box,
            "isomorphism": [[list(a), list(b)] for a, b in mapping.pairs],
        }
        return Outcome(data, f"{d}\n")
    raise InputError(f"Unknown search kind '{kind}'")


def cmd_example(toolkit: LatticeToolkit, args: argparse.Namespace) -> Outcome:
    kind = args.kind
    if kind == "lacunary":
        _require(args, "K", "m")
        return _points_outcome(toolkit.oracles.lacunary_example(args.K, args.m))
    if kind == "cube":
        _require(args, "d")
        return _points_outcome(unit_cube(args.d))
    if kind == "box":
        _require(args, "box")
        return _points_outcome(box_points(parse_box(args.box)))
    if kind == "cube-interval":
        _require(args, "d", "k")
        return _points_outcome(toolkit.oracles.cube_times_interval(args.d, args.k))
    if kind == "sidon":
        _require(args, "n")
        return _points_outcome(toolkit.oracles.greedy_sidon_set(args.n))
    raise InputError(f"Unknown example kind '{kind}'")


def cmd_sweep(toolkit: LatticeToolkit, args: argparse.Namespace) -> Outcome:
    summary = toolkit.sweep(args.sweep_id, trials=args.trials, max_size=args.max_size)
    text = (
        f"{summary.sweep_id}: {summary.instances} instances, {summary.violations} violations "
        f"(seed {summary.seed}, generator {summary.parameters.get('generator')})\n"
    )
    text += "".join("  " + f.summary_line() + "\n" for f in summary.failures)
    return Outcome(summary.to_dict(), text, summary.passed)


COMMANDS: Dict[str, Callable[[LatticeToolkit, argparse.Namespace], Outcome]] = {
    "sumset": cmd_sumset,
    "doubling": cmd_doubling,
    "project": cmd_project,
    "compress": cmd_compress,
    "downclose": cmd_downclose,
    "identity": cmd_identity,
    "proper": cmd_proper,
    "phi": cmd_phi,
    "freiman-dim": cmd_freiman_dim,
    "verify": cmd_verify,
    "cover": cmd_cover,
    "search": cmd_search,
    "example": cmd_example,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Print the JSON report instead of text")
    common.add_argument("--config", help="Path to configuration JSON file")
    common.add_argument("--max-enum", type=int, help="Enumeration budget")
    common.add_argument("--max-subset", type=int, help="Largest set whose subsets are enumerated")
    common.add_argument("--threads", type=int, help="Worker threads for sweeps (never changes results)")
    common.add_argument("--seed", type=int, help="Seed for random sweeps")
    common.add_argument("--backend", choices=BACKENDS, help="Sumset backend")
    common.add_argument("--log-level", choices=LOG_LEVELS, help="Logging level")

    parser = argparse.ArgumentParser(prog="lattice-sumsets", description="Exact sumset toolkit for integer lattices")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sumset", parents=[common], help="Minkowski sum A+B")
    p.add_argument("a")
    p.add_argument("b")

    p = sub.add_parser("doubling", parents=[common], help="Doubling constant |A+A|/|A|")
    p.add_argument("a")

    p = sub.add_parser("project", parents=[common], help="Zero every coordinate outside the given axes")
    p.add_argument("x")
    p.add_argument("--axes", default="", help="Comma-separated 1-based axes (empty for none)")

    p = sub.add_parser("compress", parents=[common], help="Compress along one axis")
    p.add_argument("a")
    p.add_argument("--axis", type=int, required=True, help="1-based axis")

    p = sub.add_parser("downclose", parents=[common], help="Compress along every axis in turn")
    p.add_argument("a")

    p = sub.add_parser("identity", parents=[common], help="Check |X+{0,1}^d| against the projection sum")
    p.add_argument("x")

    p = sub.add_parser("proper", parents=[common], help="Check t-properness of a progression")
    p.add_argument("prog")
    p.add_argument("--t", type=int, default=1)

    p = sub.add_parser("phi", parents=[common], help="Coefficient box image of A inside a 2-proper progression")
    p.add_argument("prog")
    p.add_argument("a")

    p = sub.add_parser("freiman-dim", parents=[common], help="Freiman dimension")
    p.add_argument("a")
    p.add_argument("--model", action="store_true", help="Also print a full-dimensional isomorphic copy")

    p = sub.add_parser("verify", parents=[common], help="Check one inequality")
    p.add_argument("kind", choices=VERIFY_KINDS)
    p.add_argument("--set")
    p.add_argument("--set2")
    p.add_argument("--down-x")
    p.add_argument("--down-y")
    p.add_argument("--image", help="Image points, line by line in the order of --set")
    p.add_argument("--box", help="Comma-separated side lengths")
    p.add_argument("--k", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--epsilon", help="Rational p/q")

    p = sub.add_parser("cover", parents=[common], help="Cover A by translates of a low-dimensional progression")
    p.add_argument("--set", required=True)
    p.add_argument("--prog", help="2-proper progression containing the set (bounding box when omitted)")
    p.add_argument("--epsilon", required=True, help="Rational p/q in (0, 1]")

    p = sub.add_parser("search", parents=[common], help="Brute-force searches")
    p.add_argument("kind", choices=SEARCH_KINDS)
    p.add_argument("--set")
    p.add_argument("--d", type=int)
    p.add_argument("--box")
    p.add_argument("--n", type=int)
    p.add_argument("--max-size", type=int)
    p.add_argument("--radius", type=int, default=1)

    p = sub.add_parser("example", parents=[common], help="Explicit constructions")
    p.add_argument("kind", choices=EXAMPLE_KINDS)
    p.add_argument("--K", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--box")

    p = sub.add_parser("sweep", parents=[common], help="Run a named batch of checks")
    p.add_argument("sweep_id")
    p.add_argument("--trials", type=int)
    p.add_argument("--max-size", type=int)

    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run one subcommand and write its result to stdout.

    Returns:
        0 on success, 1 if a check failed, 2 on input errors, 3 when a budget is exceeded
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_OK

    try:
        config = load_config(args.config).with_overrides(
            max_enum=args.max_enum,
            max_subset=args.max_subset,
            threads=args.threads,
            seed=args.seed,
            backend=args.backend,
            log_level=args.log_level,
        )
        logging.getLogger().setLevel(config.log_level)
        outcome = COMMANDS[args.command](LatticeToolkit(config), args)
    except LatticeError as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code

    sys.stdout.write(dumps(outcome.data) if args.json else outcome.text)
    if not outcome.passed:
        logger.error(f"{args.command}: a check failed")
        return EXIT_VIOLATION
    return EXIT_OK
