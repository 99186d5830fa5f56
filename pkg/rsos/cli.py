"""
Command-line interface for rsos.
"""

import argparse
import logging
import sys
from collections import deque
from pathlib import Path
from typing import (
    Any,
    Callable,
    Deque,
    Dict,
    Hashable,
    List,
    Optional,
    Sequence,
    Set,
    Tuple,
)

from rsos.__version__ import __version__
from rsos.assertions import Assertion, Position, SubsetOf
from rsos.classic import interactive_view, run_interactive
from rsos.core import EMPTY, Process
from rsos.data.loader import resolve_spec
from rsos.equiv import (
    BioHML,
    BoxSemantics,
    bisimilar,
    check_formula,
    distinguishing_formula,
)
from rsos.exceptions import (
    FormulaError,
    LimitExceededError,
    RsosError,
    StateSpaceGuardError,
)
from rsos.extensions import (
    ConnectedSystem,
    QuantProcess,
    connector_step,
    evaluate_constraints,
    quant_explore,
)
from rsos.formatter import (
    ConstraintFormatter,
    SummaryFormatter,
    TraceFormatter,
    VerdictFormatter,
)
from rsos.lts import BuildLimits, Mode, build_lts, export_dot, export_json
from rsos.parser import Spec, parse_formula
from rsos.sos import StepLimits, dominant_step
from rsos.utils import parse_valuation

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3


def build_parser() -> argparse.ArgumentParser:
    """Build and return the argument parser."""
    parser = argparse.ArgumentParser(
        prog="rsos",
        description="Explore reaction systems as processes: traces, state spaces, "
        "bio-similarity and bioHML model checking",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  rsos run example1 P0                    # Trace the running example
  rsos lts example1 P0 --dot p0.dot       # Build the LTS and export it
  rsos bisim biosim P0 P0b --assert F1    # Compare two systems
  rsos check biosim P0b G                 # Model check a formula
  rsos quant hsf Hsf --valuation x=5      # Stoichiometric constraints
        """,
    )
    parser.add_argument("--version", action="version", version=f"rsos {__version__}")
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="Log debug output to stderr"
    )

    commands = parser.add_subparsers(dest="command", metavar="<command>")
    commands.required = True

    run = commands.add_parser("run", help="Print a breadth-first trace of a system")
    _add_target(run)
    run.add_argument(
        "--steps", type=_non_negative, default=None, help="Maximum depth"
    )
    run.set_defaults(handler=cmd_run)

    lts = commands.add_parser("lts", help="Build the labelled transition system")
    _add_target(lts)
    lts.add_argument(
        "--mode",
        choices=[m.value for m in Mode],
        default=Mode.DOMINANT.value,
        help="Single arrow (raw) or double arrow (dominant) transitions",
    )
    lts.add_argument("--dot", type=Path, help="Write Graphviz output to this file")
    lts.add_argument("--json", type=Path, help="Write JSON output to this file")
    lts.set_defaults(handler=cmd_lts)

    bisim = commands.add_parser("bisim", help="Decide bio-similarity of two systems")
    bisim.add_argument("spec", help="Spec file or bundled example name")
    bisim.add_argument("p", help="First system")
    bisim.add_argument("q", help="Second system")
    bisim.add_argument(
        "--assert", dest="assertion", required=True, help="Assertion name"
    )
    bisim.add_argument(
        "--box",
        choices=[b.value for b in BoxSemantics],
        default=BoxSemantics.STRICT.value,
        help="Box reading the witness must separate the systems under",
    )
    bisim.set_defaults(handler=cmd_bisim)

    check = commands.add_parser("check", help="Model check a bioHML formula")
    _add_target(check)
    check.add_argument("formula", help="Formula name, or formula text")
    check.add_argument("--assert", dest="assertion", help="Assertion name")
    check.add_argument(
        "--box",
        choices=[b.value for b in BoxSemantics],
        default=BoxSemantics.STRICT.value,
        help="Reading of box modalities",
    )
    check.set_defaults(handler=cmd_check)

    quant = commands.add_parser("quant", help="List stoichiometric constraints")
    _add_target(quant)
    quant.add_argument(
        "--valuation", default=None, help="Variable values, e.g. x=5,y=2"
    )
    quant.add_argument(
        "--steps", type=_non_negative, default=None, help="Maximum depth"
    )
    quant.set_defaults(handler=cmd_quant)

    return parser


def _add_target(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("spec", help="Spec file or bundled example name")
    parser.add_argument("name", help="System name")


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must not be negative")
    return value


def trace(
    initial: Hashable,
    successors: Callable[[Any], Sequence[Tuple[Any, Any]]],
    max_steps: Optional[int] = None,
) -> List[Dict[str, Any]]:
    """
    Breadth-first trace over distinct states.

    Args:
        initial: Start state
        successors: Ordered ``(label, target)`` pairs of a state
        max_steps: States at this depth are not expanded

    Returns:
        Trace entries for :class:`~rsos.formatter.TraceFormatter`
    """
    entries: List[Dict[str, Any]] = []
    seen: Set[Hashable] = {initial}
    frontier: Deque[Tuple[Any, int]] = deque([(initial, 0)])
    while frontier:
        state, depth = frontier.popleft()
        if max_steps is not None and depth >= max_steps:
            continue
        moves = successors(state)
        if not moves:
            entries.append({"depth": depth, "label": None, "target": state})
        for label, target in moves:
            entries.append({"depth": depth + 1, "label": label, "target": target})
            if target not in seen:
                seen.add(target)
                frontier.append((target, depth + 1))
    return entries


def _process_moves(p: Process) -> List[Tuple[Any, Any]]:
    steps = sorted(dominant_step(p), key=lambda s: s.sort_key())
    return [(s.label, s.target) for s in steps]


def _link_moves(s: ConnectedSystem) -> List[Tuple[Any, Any]]:
    return sorted(connector_step(s), key=lambda m: (str(m[0]), str(m[1])))


def cmd_run(spec: Spec, args: argparse.Namespace) -> int:
    if args.name in spec.links:
        link = spec.link(args.name)
        data: Dict[str, Any] = {
            "initial": link,
            "entries": trace(link, _link_moves, args.steps),
        }
    else:
        p = spec.system(args.name)
        data = {"initial": p, "entries": trace(p, _process_moves, args.steps)}
        view = interactive_view(p)
        if view is not None:
            reactions, gamma = view
            ip, seq = run_interactive(reactions, gamma)
            data["tau"], data["delta"] = seq.tau, ip.delta
    print(TraceFormatter().format(data))
    return EXIT_OK


def cmd_lts(spec: Spec, args: argparse.Namespace) -> int:
    p = spec.system(args.name)
    lts = build_lts(p, Mode(args.mode), BuildLimits.from_env(), StepLimits.from_env())
    if args.dot:
        args.dot.write_text(export_dot(lts), encoding="utf-8")
    if args.json:
        args.json.write_text(export_json(lts), encoding="utf-8")
    summary = {
        "states": len(lts),
        "transitions": len(lts.transitions),
        "deadlocks": len(lts.deadlocks()),
    }
    print(SummaryFormatter().format(summary))
    return EXIT_OK


def cmd_bisim(spec: Spec, args: argparse.Namespace) -> int:
    p, q = spec.system(args.p), spec.system(args.q)
    f = spec.assertion(args.assertion)
    limits = BuildLimits.from_env()
    holds = bisimilar(p, q, f, limits)
    box = BoxSemantics(args.box)
    witness = (
        None
        if holds
        else distinguishing_formula(p, q, f, args.assertion, limits, box)
    )
    verdict = {"holds": holds, "witness": witness}
    print(VerdictFormatter("BISIMILAR", "NOT BISIMILAR").format(verdict))
    return EXIT_OK if holds else EXIT_FALSE


def _ambient(
    spec: Spec, g: BioHML, name: Optional[str]
) -> Tuple[Optional[str], Assertion]:
    if name is None:
        names = g.assertions()
        if len(names) > 1:
            raise FormulaError(f"formula {g} mixes assertions; pick one with --assert")
        if not names:
            # Without modalities the assertion is never consulted.
            return None, SubsetOf(EMPTY, Position.W)
        name = next(iter(names))
    return name, spec.assertion(name)


def cmd_check(spec: Spec, args: argparse.Namespace) -> int:
    p = spec.system(args.name)
    if args.formula in spec.formulas:
        g = spec.formula(args.formula)
    else:
        g = parse_formula(args.formula, spec.assertions)
    name, f = _ambient(spec, g, args.assertion)
    box = BoxSemantics(args.box)
    holds = check_formula(p, g, f, name, box, BuildLimits.from_env())
    print(VerdictFormatter("SAT", "UNSAT").format({"holds": holds}))
    return EXIT_OK if holds else EXIT_FALSE


def cmd_quant(spec: Spec, args: argparse.Namespace) -> int:
    p = QuantProcess.from_process(spec.system(args.name))
    exploration = quant_explore(p, args.steps, BuildLimits.from_env())
    listed = [c for c in exploration.constraints() if c.is_informative()]
    if args.valuation is not None:
        valuation = parse_valuation(args.valuation)
        violated = evaluate_constraints(listed, valuation).violated
    else:
        violated = tuple(c for c in listed if c.rhs.is_constant() and not c.holds({}))
    print(ConstraintFormatter().format({"constraints": listed, "violated": violated}))
    return EXIT_FALSE if violated else EXIT_OK


def _report(error: Exception) -> None:
    print(f"Error: {error}", file=sys.stderr)
    for extra in getattr(error, "diagnostics", [])[1:]:
        print(f"Error: {extra}", file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main CLI entry point.

    Args:
        argv: Command line arguments (for testing)

    Returns:
        Exit status: 0 true verdict, 1 false verdict, 2 usage or input
        error, 3 exploration limit exceeded
    """
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        spec = resolve_spec(args.spec)
        return args.handler(spec, args)
    except (LimitExceededError, StateSpaceGuardError) as e:
        _report(e)
        return EXIT_LIMIT
    except (RsosError, ValueError, OSError) as e:
        _report(e)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
