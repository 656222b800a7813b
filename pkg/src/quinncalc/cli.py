"""Command-line front end.

Exit codes: 0 success or equal, 1 a check failed, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import presentations as pres
from .ambialgebra import trace_unit_solve, unit_e
from .category import load_category, validate
from .errors import NotSpecialError, ParseError, QuinnError
from .scripts import (
    BUILTIN_SCRIPTS,
    EXAMPLE_SHAPE,
    ShapeDescriptor,
    check_relation,
    evaluate,
    format_script,
    parse_script,
)
from .trees import enumerate_admissible, format_state, format_tree, parse_pattern, parse_state, shape_of
from .worked import reproduce

OK, FAILED, USAGE = 0, 1, 2


class _Color:
    def __init__(self, stream):
        env = os.environ.get("QUINNCALC_COLOR")
        if env in ("0", "1"):
            self.on = env == "1"
        else:
            self.on = hasattr(stream, "isatty") and stream.isatty()

    def __call__(self, text: str, good: bool) -> str:
        if not self.on:
            return text
        return f"\x1b[{32 if good else 31}m{text}\x1b[0m"


def _read_text(arg: str) -> str:
    """A path to an existing file is read; anything else is taken literally."""
    path = Path(arg)
    try:
        if path.is_file():
            return path.read_text(encoding="utf-8")
    except OSError:
        pass
    return arg


def _category(args):
    return load_category(args.category, args.p)


def _script(args, cat, start_shape):
    name = args.script
    if name in BUILTIN_SCRIPTS:
        shape = start_shape if start_shape is not None else EXAMPLE_SHAPE
        site = "R" if args.at is None else args.at.strip(".")
        return BUILTIN_SCRIPTS[name](ShapeDescriptor(shape, site))
    path = Path(name)
    if not path.is_file():
        raise ParseError(f"no such script file or built-in: {name!r}")
    return parse_script(path.read_text(encoding="utf-8"), cat, path.stem)


def cmd_validate(args, out, color) -> int:
    cat = _category(args)
    report = validate(cat)
    for line in report.lines(cat):
        out.write(line + "\n")
    verdict = "valid" if report.ok else "INVALID"
    out.write(color(verdict, report.ok) + "\n")
    return OK if report.ok else FAILED


def cmd_trace_unit(args, out, color) -> int:
    cat = _category(args)
    try:
        c = trace_unit_solve(cat)
    except NotSpecialError as exc:
        out.write(color(f"not special: {exc}", False) + "\n")
        return FAILED
    if args.show_unit:
        out.write(f"e = {unit_e(cat).format(cat)}\n")
    out.write(f"c = {c.format(cat)}\n")
    return OK


def cmd_eval(args, out, color) -> int:
    cat = _category(args)
    start = parse_state(_read_text(args.start), cat)
    script = _script(args, cat, start.shape)
    trace = [] if args.trace else None
    result = evaluate(cat, script, start, trace)
    if trace is not None:
        for i, (mv, state) in enumerate(trace):
            head = "start" if mv is None else f"{i - 1}: {mv}"
            out.write(f"# {head}\n")
            for line in format_state(state, cat):
                out.write(f"  {line}\n")
        out.write("# result\n")
    for line in format_state(result, cat):
        out.write(line + "\n")
    return OK


def cmd_check_relation(args, out, color) -> int:
    cat = _category(args)
    shape = shape_of(parse_pattern(args.shape, cat)) if args.shape else None
    scripts = []
    for name in (args.first, args.second):
        args.script = name
        scripts.append(_script(args, cat, shape))
    domain = enumerate_admissible(cat, shape) if shape is not None else None
    report = check_relation(cat, scripts[0], scripts[1], domain)
    if report.equal:
        out.write(color(f"EQUAL over {report.count} starts", True) + "\n")
        return OK
    start, a, b = report.counterexample
    out.write(color(f"DIFFER at start {format_tree(start, cat)}", False) + "\n")
    for label, state in ((args.first, a), (args.second, b)):
        out.write(f"  {label}:\n")
        for line in format_state(state, cat):
            out.write(f"    {line}\n")
    return FAILED


def cmd_show_script(args, out, color) -> int:
    cat = _category(args)
    shape = shape_of(parse_pattern(args.shape, cat)) if args.shape else None
    out.write(format_script(_script(args, cat, shape)))
    return OK


def cmd_present_transform(args, out, color) -> int:
    p = pres.parse_presentation(_read_text(args.presentation).strip())
    steps = pres.parse_transformations(_read_text(args.script))
    before = pres.smith_invariants(p)
    out.write(f"start   {pres.format_presentation(p)}\n")
    for t in steps:
        p = t.apply(p)
        out.write(f"{pres.format_transformation(t):<20} {pres.format_presentation(p)}\n")
    after = pres.smith_invariants(p)
    out.write(f"smith   {before} -> {after}\n")
    # prolongation adds a trivial 1 to the diagonal, so compare the rest
    if args.check and sorted(x for x in before if x != 1) != sorted(x for x in after if x != 1):
        out.write(color("smith invariants changed", False) + "\n")
        return FAILED
    return OK


def cmd_reproduce(args, out, color) -> int:
    lines, ok = reproduce()
    for line in lines:
        if line.endswith(" ok"):
            line = line[:-2] + color("ok", True)
        elif line.endswith("MISMATCH"):
            line = line[: -len("MISMATCH")] + color("MISMATCH", False)
        out.write(line + "\n")
    return OK if ok else FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quinncalc", description="Roottree calculus over small fusion categories.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--category", default="c5", help="category file or built-in name (default: c5)")
    common.add_argument("--p", type=int, default=None, help="prime, only with a full category file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate-category", parents=[common], help="check the axioms of a category")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("trace-unit", parents=[common], help="solve for the trace unit c")
    p.add_argument("--show-unit", action="store_true", help="also print the unit e")
    p.set_defaults(func=cmd_trace_unit)

    p = sub.add_parser("eval", parents=[common], help="run a move script on a start state")
    p.add_argument("--script", required=True, help="script file or built-in (newseq, vertexpass, bubble, identity)")
    p.add_argument("--start", required=True, help="state file or tree expression")
    p.add_argument("--at", default=None, help="site path for built-in scripts (default R, '.' for the root)")
    p.add_argument("--trace", action="store_true", help="print every intermediate state")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("check-relation", parents=[common], help="compare two scripts on every admissible start")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--shape", default=None, help="input shape pattern for built-ins, e.g. '( ? ? ):?'")
    p.add_argument("--at", default=None, help="site path for built-in scripts")
    p.set_defaults(func=cmd_check_relation)

    p = sub.add_parser("show-script", parents=[common], help="print a script in file form")
    p.add_argument("script")
    p.add_argument("--shape", default=None)
    p.add_argument("--at", default=None)
    p.set_defaults(func=cmd_show_script)

    p = sub.add_parser("present", help="group presentations")
    psub = p.add_subparsers(dest="present_command", required=True)
    t = psub.add_parser("transform", help="apply a transformation script to a presentation")
    t.add_argument("presentation", help="file or text such as '<a,b | a b A B>'")
    t.add_argument("--script", required=True, help="transformation script file or text")
    t.add_argument("--check", action="store_true", help="fail if the Smith invariants change")
    t.set_defaults(func=cmd_present_transform)

    p = sub.add_parser("reproduce-paper", help="recompute every worked number and compare")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    color = _Color(out)
    try:
        return args.func(args, out, color)
    except ParseError as exc:
        sys.stderr.write(f"quinncalc: parse error: {exc}\n")
        return USAGE
    except QuinnError as exc:
        sys.stderr.write(f"quinncalc: error: {exc}\n")
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
