#!/usr/bin/env python3
"""
setfermat CLI - batch front end for set optimization Fermat rules.

Every subcommand prints one JSON report on standard output; logs go to
standard error. Exit codes: 0 success, 2 invalid input or computation error,
3 "not stationary" (stationarity subcommand only), 1 golden-demo mismatch.
"""

import argparse
import logging
import sys
from dataclasses import replace
from typing import Any, Dict, List, Optional

import numpy as np

from .config.loader import Problem, ProblemLoader
from .config.tolerances import DEFAULT_TOLERANCES, Tolerances
from .core.scalarize import psi, psi_subdifferential
from .core.setrel import MinimalKind, Relation, minimal_indices, scalar_gap, set_equivalent, set_less
from .demo import run_demo
from .maps.scalfun import f_lower, f_upper
from .oracle.base import CheckContext
from .oracle.registry import registry
from .solver.descent import DescentParams, descend, write_csv
from .utils.errors import PreconditionError, error_boundary
from .utils.report import render, render_error
from .variational.stationarity import StationarityKind, certify

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_ERROR = 2
EXIT_NOT_STATIONARY = 3


def parse_vector(text: str) -> List[float]:
    """Parse "1,2.5,-3" into floats (argparse type)."""
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected comma-separated numbers, got '{text}'")


class SetFermatCLI:
    """Main CLI handler for setfermat commands."""

    def __init__(self, tolerances: Tolerances = DEFAULT_TOLERANCES) -> None:
        self.loader = ProblemLoader()
        self.tolerances = tolerances

    def _problem(self, args: argparse.Namespace) -> Problem:
        problem = self.loader.load(args.problem, self.tolerances)
        tol = problem.tolerances
        if getattr(args, "tol", None) is not None:
            tol = replace(tol, tau_stat=args.tol)
        return replace(problem, tolerances=tol)

    def _point(self, problem: Problem, values: Optional[List[float]], name: str = "--at") -> np.ndarray:
        if values is None:
            return problem.xbar
        point = np.asarray(values, dtype=float)
        if point.size != problem.setmap.n:
            raise PreconditionError(f"{name} needs {problem.setmap.n} coordinates, got {point.size}")
        return point

    def _emit(self, command: str, result: Dict[str, Any], tolerances: Tolerances, digest: Optional[str]) -> None:
        print(render(command, result, tolerances.as_dict(), digest))

    def validate(self, args: argparse.Namespace) -> int:
        """Load and validate a problem file."""
        problem = self._problem(args)
        setmap = problem.setmap
        result = {
            "valid": True,
            "n": setmap.n,
            "m": setmap.m,
            "p": setmap.p,
            "map": setmap.to_dict(),
            "cone": problem.cone.to_dict(),
            "omega": problem.omega.to_dict(),
            "xbar": problem.xbar,
            "affine": setmap.is_affine,
        }
        self._emit("validate", result, problem.tolerances, problem.digest)
        return EXIT_OK

    def evaluate(self, args: argparse.Namespace) -> int:
        """Evaluate F and the component Jacobians at a point."""
        problem = self._problem(args)
        x = self._point(problem, args.at)
        image = problem.setmap.evaluate(x, problem.tolerances.tau_eq)
        result = {"image": image.to_dict(), "jacobians": problem.setmap.jacobians(x)}
        self._emit("eval", result, problem.tolerances, problem.digest)
        return EXIT_OK

    def relate(self, args: argparse.Namespace) -> int:
        """Compare two finite sets under the set relations."""
        sets = self.loader.load_sets(args.sets, self.tolerances)
        if sets.B is None:
            raise PreconditionError("The relate command needs both 'A' and 'B'")
        A, B, cone, tau = sets.A, sets.B, sets.cone, sets.tolerances.tau_mem
        result = {}
        for relation, name in ((Relation.LOWER, "lower"), (Relation.UPPER, "upper")):
            result[f"{name}_less"] = set_less(A, B, cone, relation, tau=tau)
            result[f"strict_{name}"] = set_less(A, B, cone, relation, strict=True, tau=tau)
            result[f"gap_{relation.value}"] = scalar_gap(A, B, cone, relation)
            result[f"equivalent_{relation.value}"] = set_equivalent(A, B, cone, relation, tau=tau)
        self._emit("relate", result, sets.tolerances, sets.digest)
        return EXIT_OK

    def minimals(self, args: argparse.Namespace) -> int:
        """Extremal elements of the set A."""
        sets = self.loader.load_sets(args.sets, self.tolerances)
        kinds = [MinimalKind(args.kind)] if args.kind else list(MinimalKind)
        result = {}
        for kind in kinds:
            indices = minimal_indices(sets.A, sets.cone, kind, sets.tolerances.tau_mem)
            result[kind.value] = {"indices": indices, "points": sets.A.points[indices]}
        self._emit("minimals", result, sets.tolerances, sets.digest)
        return EXIT_OK

    def scalarize(self, args: argparse.Namespace) -> int:
        """Values and witness sets of f_l and f_u, or Psi_e at an image point with --point."""
        problem = self._problem(args)
        if args.point is not None:
            y = problem.cone.check_dim(args.point)
            face = psi_subdifferential(problem.cone, y, problem.tolerances.tau_act)
            result = {
                "y": y,
                "psi": psi(problem.cone, y),
                "subdifferential_vertices": face.vertices,
                "generator_indices": list(face.indices),
            }
            self._emit("scalarize", result, problem.tolerances, problem.digest)
            return EXIT_OK

        x = self._point(problem, args.at)
        anchor = self._point(problem, args.anchor, "--anchor")
        tol = problem.tolerances
        result = {
            "x": x,
            "anchor": anchor,
            "lower": f_lower(problem.setmap, problem.cone, anchor, x, tol).to_dict(),
            "upper": f_upper(problem.setmap, problem.cone, anchor, x, tol).to_dict(),
        }
        self._emit("scalarize", result, tol, problem.digest)
        return EXIT_OK

    def stationarity(self, args: argparse.Namespace) -> int:
        """Certify a Fermat rule; exit 3 when the point is not stationary."""
        problem = self._problem(args)
        x = self._point(problem, args.at)
        kind = StationarityKind.parse(args.relation)
        setmap = problem.setmap
        if args.augment is not None:
            shift = np.asarray(args.augment, dtype=float)
            setmap = setmap.augmented(-shift if kind is StationarityKind.UPPER else shift)
            logger.info(f"Certifying the map augmented by {shift.tolist()}")

        certificate = certify(setmap, problem.cone, x, kind, problem.omega, problem.tolerances)
        self._emit("stationarity", certificate.to_dict(args.dump_polytopes), problem.tolerances, problem.digest)
        return EXIT_OK if certificate.stationary else EXIT_NOT_STATIONARY

    def oracle(self, args: argparse.Namespace) -> int:
        """Run one registered oracle check."""
        problem = self._problem(args)
        check = registry.get_check(args.check)
        if check is None:
            raise PreconditionError(f"Unknown check '{args.check}'; available: {registry.list_checks()}")
        at = self._point(problem, args.at)
        context = CheckContext(problem.setmap, problem.cone, at, problem.omega, problem.tolerances)
        params = {
            name: getattr(args, name)
            for name in ("relation", "radius", "step", "seed", "trials", "probes", "k", "max_dim")
            if getattr(args, name) is not None
        }
        verdict = check.run(context, params)
        self._emit("oracle", verdict.to_dict(), problem.tolerances, problem.digest)
        return EXIT_OK

    def descend(self, args: argparse.Namespace) -> int:
        """Run the descent loop and print its trace."""
        problem = self._problem(args)
        x0 = self._point(problem, args.x0, "--x0")
        params = DescentParams(step0=args.step0, max_iters=args.max_iters, seed=args.seed)
        trace = descend(problem.setmap, problem.cone, x0, problem.omega, args.relation, params, problem.tolerances)
        if args.csv:
            write_csv(trace, args.csv)
        self._emit("descend", trace.to_dict(), problem.tolerances, problem.digest)
        return EXIT_OK

    def demo(self, args: argparse.Namespace) -> int:
        """Run the golden pipeline; exit 1 on any mismatch."""
        report = run_demo(self.tolerances)
        self._emit("demo", report.to_dict(), self.tolerances, None)
        return EXIT_OK if report.ok else EXIT_MISMATCH


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser for the CLI."""
    parser = argparse.ArgumentParser(
        prog="setfermat",
        description="setfermat - Fermat rules for set optimization",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  setfermat demo                                         # Golden example with assertions
  setfermat validate --problem configs/example61.json    # Check a problem file
  setfermat stationarity --problem configs/example61.json --relation l
  setfermat oracle --problem configs/example61.json --check minimality --radius 0.5 --step 1e-3
  setfermat descend --problem configs/singleton_box.yaml --x0=1 --relation l --csv trace.csv

Vectors are comma-separated; write negative values as --at=-1,2.
""",
    )
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default="WARNING",
        help="Logging level (logs go to stderr)",
    )
    parser.add_argument("--tolerances", help="JSON or YAML file overriding the tolerance table")

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    def with_problem(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("--problem", required=True, help="Path to a problem file (.json/.yaml)")
        return sub

    with_problem("validate", "Validate a problem file")

    eval_parser = with_problem("eval", "Evaluate F and its Jacobians")
    eval_parser.add_argument("--at", type=parse_vector, help="Point (default: xbar)")

    for name, help_text in (("relate", "Compare two sets"), ("minimals", "Extremal elements of a set")):
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("--sets", required=True, help="Path to a sets file")
        if name == "minimals":
            sub.add_argument("--kind", choices=[k.value for k in MinimalKind], help="Only this kind")

    scalarize_parser = with_problem("scalarize", "Evaluate f_l and f_u with witnesses")
    scalarize_parser.add_argument("--at", type=parse_vector, help="Point x (default: xbar)")
    scalarize_parser.add_argument("--anchor", type=parse_vector, help="Anchor xbar (default: problem xbar)")
    scalarize_parser.add_argument(
        "--point", type=parse_vector, help="Image point y: print Psi_e(y) and its subdifferential instead"
    )

    stat_parser = with_problem("stationarity", "Certify a Fermat rule")
    stat_parser.add_argument("--relation", choices=["l", "u", "vector"], default="l")
    stat_parser.add_argument("--at", type=parse_vector, help="Point (default: xbar)")
    stat_parser.add_argument("--tol", type=float, help="Override tau_stat")
    stat_parser.add_argument("--dump-polytopes", action="store_true", help="Include G/H/A/B with provenance")
    stat_parser.add_argument("--augment", type=parse_vector, help="Add components f_i + k (l) or f_i - k (u)")

    oracle_parser = with_problem("oracle", "Run a brute-force oracle check")
    oracle_parser.add_argument("--check", required=True, help="Check name (minimality, consistency, ...)")
    oracle_parser.add_argument("--at", type=parse_vector, help="Point (default: xbar)")
    oracle_parser.add_argument(
        "--relation", choices=["l", "u", "l-nonstrict", "u-nonstrict", "vector-weak", "vector-weak-max"]
    )
    oracle_parser.add_argument("--radius", type=float)
    oracle_parser.add_argument("--step", type=float)
    oracle_parser.add_argument("--seed", type=int)
    oracle_parser.add_argument("--trials", type=int)
    oracle_parser.add_argument("--probes", type=int)
    oracle_parser.add_argument("--k", type=parse_vector, help="Cone element for the invariance check")
    oracle_parser.add_argument("--max-dim", type=int, help="Raise the grid dimension cap")

    descend_parser = with_problem("descend", "Run the sampling descent loop")
    descend_parser.add_argument("--x0", type=parse_vector, help="Start point (default: xbar)")
    descend_parser.add_argument("--relation", choices=["l", "u"], default="l")
    descend_parser.add_argument("--seed", type=int, default=0)
    descend_parser.add_argument("--max-iters", type=int, default=200)
    descend_parser.add_argument("--step0", type=float)
    descend_parser.add_argument("--csv", help="Also write the trace as CSV")

    subparsers.add_parser("demo", help="Run the built-in golden example")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the CLI."""
    parser = create_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )

    if not args.command:
        parser.print_help()
        return EXIT_ERROR

    def fail(error: Exception) -> int:
        print(render_error(args.command, error))
        return EXIT_ERROR

    registry.auto_discover()

    @error_boundary(default_return=EXIT_ERROR, on_error=fail)
    def dispatch() -> int:
        tolerances = DEFAULT_TOLERANCES
        if args.tolerances:
            tolerances = ProblemLoader().load_tolerances(args.tolerances)
        cli = SetFermatCLI(tolerances)

        handlers = {
            "validate": cli.validate,
            "eval": cli.evaluate,
            "relate": cli.relate,
            "minimals": cli.minimals,
            "scalarize": cli.scalarize,
            "stationarity": cli.stationarity,
            "oracle": cli.oracle,
            "descend": cli.descend,
            "demo": cli.demo,
        }
        return handlers[args.command](args)

    try:
        return dispatch()
    except Exception as e:
        logger.error(f"Unexpected {type(e).__name__} in {args.command}: {e}", exc_info=True)
        return fail(e)


if __name__ == "__main__":
    sys.exit(main())
