"""Command-line front end.

Exit status: 0 on success, 1 on a domain error, 2 when ``verify`` finds a
failing triple, 64 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence

from . import __version__
from .classifier import (
    classify,
    mountain_range,
    mountain_range_k2,
    verify_counts,
)
from .errors import DomainError
from .exact_arith import Slope
from .farey_graph import bypass_attach, shortest_farey_path
from .rotation_data import ENV_VAR
from .surgery_calculus import build_surgery_family, invariants_report, load_diagram
from .tight_enum import count_strongly_exceptional

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_VERIFY = 2
EXIT_USAGE = 64

DEFAULT_GRID = (range(-5, 9), range(-5, 7), range(-5, 7))


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_range(text: str) -> range:
    """``A..B`` (inclusive) or a single integer."""
    m = re.fullmatch(r"\s*(-?\d+)\s*(?:\.\.\s*(-?\d+)\s*)?", text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected an integer or A..B, got {text!r}")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) is not None else lo
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return range(lo, hi + 1)


def _slope(text: str) -> Slope:
    try:
        return Slope.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a slope: {text!r}") from exc


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def _table(headers: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    cells = [[str(h) for h in headers]] + [[_fmt(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.rjust(w) if i < len(widths) - 1 else c for i, (c, w) in enumerate(zip(r, widths)))
             for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(l.rstrip() for l in lines) + "\n"


def _jsonable(x):
    if isinstance(x, Fraction):
        return _fmt(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


# -- commands ----------------------------------------------------------------

def cmd_classify(args, out) -> int:
    classes = classify(args.t0, args.t1, args.t2)
    if args.format == "structured":
        for c in classes:
            out.write(json.dumps(c.to_record()) + "\n")
        return EXIT_OK
    out.write(f"tb = ({args.t0}, {args.t1}, {args.t2}): {len(classes)} classes\n")
    out.write(_table(
        ["r0", "r1", "r2", "d3", "ambient", "provenance"],
        [(c.r.r0, c.r.r1, c.r.r2, c.d3, c.ambient, c.provenance) for c in classes],
    ))
    return EXIT_OK


def cmd_count(args, out) -> int:
    case = count_strongly_exceptional(args.t0, args.t1, args.t2)
    if args.format == "structured":
        out.write(json.dumps({"t0": args.t0, "t1": args.t1, "t2": args.t2,
                              "count": case.formula_value, "branch": case.branch}) + "\n")
    else:
        out.write(f"{case.formula_value}\n")
    return EXIT_OK


def cmd_invariants(args, out) -> int:
    if (args.diagram is None) == (args.family is None):
        raise UsageError("give exactly one of a diagram file or --family T0")
    dgm = build_surgery_family(args.family) if args.diagram is None else load_diagram(args.diagram)
    rep = invariants_report(dgm)
    if args.format == "structured":
        out.write(json.dumps(_jsonable(rep)) + "\n")
        return EXIT_OK
    out.write(_table(["invariant", "value"], [(k, rep[k]) for k in ("knots", "det", "signature", "c2", "d3")]))
    if rep["components"]:
        out.write("\n")
        out.write(_table(
            ["component", "tb", "rot", "bordered_det"],
            [(c["name"], c["tb"], c["rot"], c["bordered_det"]) for c in rep["components"]],
        ))
    return EXIT_OK


def cmd_bypass(args, out) -> int:
    res = bypass_attach(args.s, args.r, args.side)
    if args.format == "structured":
        out.write(json.dumps({"s": str(args.s), "r": str(args.r), "side": args.side, "result": str(res)}) + "\n")
    else:
        out.write(f"{res}\n")
    return EXIT_OK


def cmd_path(args, out) -> int:
    direction = None if args.direction == "shortest" else args.direction
    path = shortest_farey_path(args.a, args.b, direction)
    nodes = [str(x) for x in path]
    if args.format == "structured":
        out.write(json.dumps({"a": str(args.a), "b": str(args.b), "length": len(path), "nodes": nodes}) + "\n")
    else:
        out.write(f"{len(path)}: {' -> '.join(nodes)}\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    if args.grid == "default":
        grid = DEFAULT_GRID
    else:
        if None in (args.t0_range, args.t1_range, args.t2_range):
            raise UsageError("without --grid default, give --t0-range, --t1-range and --t2-range")
        grid = (args.t0_range, args.t1_range, args.t2_range)
    report = verify_counts(*grid, jobs=args.jobs)
    if args.format == "structured":
        for r in report.rows:
            out.write(json.dumps({"t0": r.t[0], "t1": r.t[1], "t2": r.t[2], "branch": r.branch,
                                  "formula": r.formula, "classes": r.classes,
                                  "enumerated": r.enumerated, "ok": r.ok, "error": r.error}) + "\n")
    else:
        fails = report.failures
        if fails:
            out.write(_table(
                ["t0", "t1", "t2", "formula", "classes", "enumerated", "error"],
                [(*r.t, r.formula, "-" if r.classes is None else r.classes, r.enumerated, r.error or "")
                 for r in fails],
            ))
        out.write(f"{len(report) - len(fails)}/{len(report)} triples verified\n")
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_mountain(args, out) -> int:
    if args.axis == "K0":
        if args.t1 is None or args.t2 is None or args.t0_range is None:
            raise UsageError("--axis K0 needs --t1, --t2 and --t0-range")
        g = mountain_range(args.t1, args.t2, args.t0_range)
    else:
        if args.t0 is None or args.t1 is None or args.t2_range is None:
            raise UsageError("--axis K2 needs --t0, --t1 and --t2-range")
        g = mountain_range_k2(args.t0, args.t1, args.t2_range)
    out.write(g.to_dot())
    return EXIT_OK


# -- parser ----------------------------------------------------------------------

def _add_triple(p: argparse.ArgumentParser) -> None:
    for name in ("--t0", "--t1", "--t2"):
        p.add_argument(name, type=int, required=True)


def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("table", "structured"), default="table")


def _add_bypass(sub, name: str) -> None:
    p = sub.add_parser(name, help="dividing slope after a bypass attachment")
    p.add_argument("s", type=_slope, help="current dividing slope")
    p.add_argument("r", type=_slope, help="slope of the attaching ruling")
    p.add_argument("--side", choices=("front", "back"), default="front")
    _add_format(p)
    p.set_defaults(func=cmd_bypass)


def _add_path(sub, name: str) -> None:
    p = sub.add_parser(name, help="minimal Farey path between two slopes")
    p.add_argument("a", type=_slope)
    p.add_argument("b", type=_slope)
    p.add_argument("--direction", choices=("counterclockwise", "clockwise", "ccw", "cw", "shortest"),
                   default="counterclockwise")
    _add_format(p)
    p.set_defaults(func=cmd_path)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="a3links",
        description="Strongly exceptional Legendrian A3 links: counts, invariants and Farey utilities.",
        epilog=f"Set {ENV_VAR} or pass --tables to use another rotation-table file.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--tables", metavar="PATH", help="rotation-table data file")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("classify", help="list every class with the given tb triple")
    _add_triple(p)
    _add_format(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("count", help="number of classes from the closed-form count")
    _add_triple(p)
    _add_format(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("invariants", help="tb, rot and d3 of a surgery diagram")
    p.add_argument("diagram", nargs="?", help="YAML or JSON diagram file")
    p.add_argument("--family", type=int, metavar="T0", help="use the built-in family with tb (T0, 2, 2)")
    _add_format(p)
    p.set_defaults(func=cmd_invariants)

    _add_bypass(sub, "farey-bypass")
    _add_path(sub, "farey-path")
    p = sub.add_parser("farey", help="Farey utilities (bypass, path)")
    fsub = p.add_subparsers(dest="farey_command", metavar="ACTION", parser_class=_Parser)
    fsub.required = True
    _add_bypass(fsub, "bypass")
    _add_path(fsub, "path")

    p = sub.add_parser("verify", help="cross-check counts, tables and enumeration on a grid")
    p.add_argument("--grid", choices=("default",), help="t0 in -5..8, t1 and t2 in -5..6")
    p.add_argument("--t0-range", type=_int_range, metavar="A..B")
    p.add_argument("--t1-range", type=_int_range, metavar="A..B")
    p.add_argument("--t2-range", type=_int_range, metavar="A..B")
    p.add_argument("--jobs", type=int, default=1)
    _add_format(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("mountain", help="stabilization graph in DOT format")
    p.add_argument("--axis", choices=("K0", "K2"), default="K0")
    p.add_argument("--t0", type=int)
    p.add_argument("--t1", type=int)
    p.add_argument("--t2", type=int)
    p.add_argument("--t0-range", type=_int_range, metavar="A..B")
    p.add_argument("--t2-range", type=_int_range, metavar="A..B")
    p.set_defaults(func=cmd_mountain)
    return parser


def _protect_negatives(argv: Sequence[str]) -> List[str]:
    # argparse reads "-1/3" or "-5..8" as an unknown option; a leading space
    # makes it positional and every value parser here strips whitespace
    return [" " + a if re.fullmatch(r"-\d+(/\d+|\.\.-?\d+)", a) else a for a in argv]


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(_protect_negatives(sys.argv[1:] if argv is None else argv))
    saved = os.environ.get(ENV_VAR)
    if args.tables:
        # worker processes of verify --jobs inherit the environment
        os.environ[ENV_VAR] = args.tables
    try:
        return args.func(args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"a3links: error: {exc}\n")
        return EXIT_USAGE
    except DomainError as exc:
        sys.stderr.write(f"a3links: {type(exc).__name__}: {exc}\n")
        return EXIT_DOMAIN
    finally:
        if saved is None:
            os.environ.pop(ENV_VAR, None)
        else:
            os.environ[ENV_VAR] = saved


if __name__ == "__main__":
    raise SystemExit(main())
