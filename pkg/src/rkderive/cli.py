"""Command-line front end: ``rkderive <subcommand> ...``.

Exit codes: 0 success, 1 validation failure (a check ran and failed),
2 usage or input errors.  Diagnostics go to stderr prefixed ``error:``.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from . import __version__
from .algebra import (
    ORDERS,
    LinearSystemError,
    ParseError,
    VarTable,
    format_poly,
    interreduce,
    parse_poly,
    parse_polys,
)
from .algebra.textform import names_in
from .conditions import generate_conditions, tree_conditions
from .harness import DivergedError, estimate_order, get_problem
from .solver import (
    ExcludedLocusError,
    FamilySolution,
    ResidualError,
    solve_order3_family,
    solve_order4_equal_c,
    solve_order4_family,
)
from .tableau import (
    ButcherTableau,
    TableauError,
    catalogue,
    embed_lower_order,
    load_tableau,
    parse_rational,
    to_latex,
    to_text_form,
    verify_order,
)
from .trees import enumerate_trees


class UsageError(Exception):
    """Bad arguments or unreadable input (exit code 2)."""


class CheckFailed(Exception):
    """A verification ran and did not pass (exit code 1)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except TableauError:
        raise argparse.ArgumentTypeError(f"expected a rational 'p/q', got {text!r}") from None


def _tableau(ref: str) -> ButcherTableau:
    """A tableau file, or a catalogue name when no such file exists."""
    if os.path.exists(ref):
        return load_tableau(ref)
    cat = catalogue()
    if ref in cat:
        return cat[ref]
    raise UsageError(f"no tableau file or catalogue entry named {ref!r}")


# -- conditions / trees ------------------------------------------------------------

def cmd_conditions(args, out):
    cs = generate_conditions(args.stages, args.order, autonomous=args.autonomous, row_sum=args.row_sum)
    if args.format == "machine":
        doc = {"stages": cs.stages, "order": cs.order, "mode": cs.mode, "row_sum": cs.row_sum,
               "variables": list(cs.table.names), "equations": cs.to_records()}
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        for e in cs.equations:
            out.write(format_poly(e) + "\n")
    return 0


def cmd_trees(args, out):
    s = args.stages or args.order
    cs = tree_conditions(s, args.order)
    out.write(f"{'order':>5} {'gamma':>6}  {'tree':<14} condition (= 0)\n")
    for t, e in zip(enumerate_trees(args.order), cs.raw):
        out.write(f"{t.order:>5} {t.density:>6}  {str(t):<14} {format_poly(e)}\n")
    return 0


# -- reduce -----------------------------------------------------------------------

_RK_NAME = re.compile(r"^([abcsu])(\d)(\d?)$")


def _default_order(names: Sequence[str]) -> List[str]:
    """a's by (row, column), then b's, c's, s's, then everything else as met."""
    rank = {"a": 0, "b": 1, "c": 2, "s": 3}

    def key(item):
        pos, n = item
        m = _RK_NAME.match(n)
        if m and m.group(1) in rank and (m.group(1) == "a") == bool(m.group(3)):
            return (0, rank[m.group(1)], int(m.group(2)), int(m.group(3) or 0), pos)
        return (1, 0, 0, 0, pos)

    return [n for _, n in sorted(enumerate(names), key=key)]


def cmd_reduce(args, out):
    try:
        with open(args.file, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    names: List[str] = []
    for text in lines + [v.split("=", 1)[-1] for v in args.subst]:
        for n in names_in(text.split("#", 1)[0]):
            if n not in names:
                names.append(n)
    if args.var_order:
        given = [n.strip() for n in args.var_order.split(",") if n.strip()]
        if len(set(given)) != len(given):
            raise UsageError("--var-order lists a variable twice")
        names = given + [n for n in _default_order(names) if n not in given]
    else:
        names = _default_order(names)
    table = VarTable(names)
    eqs = parse_polys(lines, table)
    mapping = {}
    for item in args.subst:
        if "=" not in item:
            raise UsageError(f"--subst expects NAME=VALUE, got {item!r}")
        name, value = (x.strip() for x in item.split("=", 1))
        if name not in table:
            raise UsageError(f"--subst: unknown variable {name!r}")
        mapping[name] = parse_poly(value, table)
    if mapping:
        eqs = [e.subs(mapping) for e in eqs]
    eqs = [e for e in eqs if not e.is_zero()]
    order = ORDERS[args.order]
    for p in interreduce(eqs, order):
        out.write(format_poly(p, order) + "\n")
    return 0


# -- solve-family ---------------------------------------------------------------------

def _print_family(fam: FamilySolution, out):
    out.write(f"# {fam.label}\n")
    if fam.free:
        out.write(f"# free: {', '.join(fam.free)}\n")
    for k, v in fam.solution.items():
        out.write(f"{k} = {v}\n")
    for d in fam.excluded:
        out.write(f"# excluded: {format_poly(d)} = 0\n")
    for n in fam.notes:
        out.write(f"# note: {n}\n")


def cmd_solve_family(args, out):
    point = {}
    if args.scenario in ("order3", "order4"):
        if args.r1 is not None:
            raise UsageError("--r1 applies to the order4-equal-c scenario only")
        if (args.c2 is None) != (args.c3 is None):
            raise UsageError("give both --c2 and --c3, or neither")
        if args.c2 is not None:
            point = {"c2": args.c2, "c3": args.c3}
        fam = solve_order3_family() if args.scenario == "order3" else solve_order4_family()
    else:
        if args.c2 is not None or args.c3 is not None:
            raise UsageError("order4-equal-c takes --r1, not --c2/--c3")
        if args.r1 is not None:
            point = {"r1": args.r1}
        fam = solve_order4_equal_c()
    if point:
        fam = fam.specialize(point)
    _print_family(fam, out)
    return 0


# -- verify / embed / order-test ---------------------------------------------------------

def cmd_verify(args, out):
    t = _tableau(args.tableau)
    report = verify_order(t, args.order, weights=args.weights)
    out.write(str(report) + "\n")
    if not report.satisfied:
        raise CheckFailed(f"{t.label or args.tableau} is not of order {args.order}")
    return 0


def cmd_embed(args, out):
    t = _tableau(args.tableau)
    p = args.order or t.order
    if p is None:
        raise UsageError("the tableau has no 'order' field; pass --order")
    try:
        fam = embed_lower_order(t, p)
    except ValueError as exc:
        raise CheckFailed(str(exc)) from None
    if args.r1 is None:
        _print_family(fam.family, out)
        return 0
    pair = fam.pair(r1=args.r1)
    full, hat = pair.verify()
    ext = pair.extended
    out.write(to_latex(ext) if args.format == "latex" else to_text_form(ext))
    if not (full.satisfied and hat.satisfied):
        raise CheckFailed("embedded pair failed exact verification")
    return 0


def cmd_order_test(args, out):
    t = _tableau(args.tableau)
    weights = None
    if args.weights == "bhat":
        if t.bhat is None:
            raise UsageError("the tableau has no bhat row")
        weights = t.bhat
    rep = estimate_order(t, get_problem(args.problem), args.h0, args.levels, weights=weights)
    out.write(str(rep) + "\n")
    return 0


def cmd_catalogue(args, out):
    cat = catalogue()
    if args.name:
        if args.name not in cat:
            raise UsageError(f"unknown method {args.name!r}; known: {', '.join(cat)}")
        items = {args.name: cat[args.name]}
    else:
        items = cat
    if args.format == "machine":
        doc = {k: t.to_dict() for k, t in items.items()}
        out.write(json.dumps(doc if not args.name else doc[args.name], indent=2) + "\n")
    elif args.format == "latex":
        for k, t in items.items():
            out.write(f"% {k}: {t.label}\n{to_latex(t)}")
    else:
        for k, t in items.items():
            out.write(f"{k:<20} order {t.order}  {t.label}\n")
            if args.name:
                out.write(_pretty(t))
    return 0


def _pretty(t: ButcherTableau) -> str:
    cells = [[str(t.c[i])] + [str(x) for x in t.a[i]] for i in range(t.s)]
    rows = cells + [[""] + [str(x) for x in t.b]]
    if t.bhat is not None:
        rows.append([""] + [str(x) for x in t.bhat])
    width = max(len(x) for r in rows for x in r)
    lines = []
    for k, r in enumerate(rows):
        if k == t.s:
            lines.append("-" * ((width + 1) * (t.s + 1) + 1))
        lines.append(f"{r[0]:>{width}} | " + " ".join(f"{x:>{width}}" for x in r[1:]))
    return "\n".join(lines) + "\n"


# -- parser ---------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="rkderive", description="Derive and verify explicit Runge-Kutta methods exactly.")
    ap.add_argument("--version", action="version", version=f"rkderive {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("conditions", help="order conditions from the series expansion")
    p.add_argument("--stages", type=int, required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--autonomous", action="store_true")
    p.add_argument("--row-sum", action="store_true")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.set_defaults(run=cmd_conditions)

    p = sub.add_parser("trees", help="rooted trees with density and condition")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--stages", type=int, default=None, help="stage count (default: the order)")
    p.set_defaults(run=cmd_trees)

    p = sub.add_parser("reduce", help="interreduce the equations in FILE (one per line)")
    p.add_argument("file")
    p.add_argument("--var-order", default=None, help="comma-separated variables, largest first")
    p.add_argument("--subst", action="append", default=[], metavar="NAME=VALUE")
    p.add_argument("--order", choices=sorted(ORDERS), default="lex", help="monomial order")
    p.set_defaults(run=cmd_reduce)

    p = sub.add_parser("solve-family", help="closed-form coefficient families")
    p.add_argument("--scenario", choices=("order3", "order4", "order4-equal-c"), required=True)
    p.add_argument("--c2", type=_rational)
    p.add_argument("--c3", type=_rational)
    p.add_argument("--r1", type=_rational)
    p.set_defaults(run=cmd_solve_family)

    p = sub.add_parser("verify", help="exact order verification of a tableau")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--weights", choices=("b", "bhat"), default="b")
    p.add_argument("tableau", help="tableau file or catalogue name")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("embed", help="embedded lower-order weights for a tableau")
    p.add_argument("tableau", help="tableau file or catalogue name")
    p.add_argument("--r1", type=_rational)
    p.add_argument("--order", type=int, default=None, help="base order (default: from the file)")
    p.add_argument("--format", choices=("text", "latex"), default="text")
    p.set_defaults(run=cmd_embed)

    p = sub.add_parser("order-test", help="empirical convergence order")
    p.add_argument("tableau", help="tableau file or catalogue name")
    p.add_argument("--problem", required=True, choices=("exp", "linear", "riccati"))
    p.add_argument("--h0", type=_rational, required=True)
    p.add_argument("--levels", type=int, default=5)
    p.add_argument("--weights", choices=("b", "bhat"), default="b")
    p.set_defaults(run=cmd_order_test)

    p = sub.add_parser("catalogue", help="built-in methods")
    p.add_argument("--name")
    p.add_argument("--format", choices=("text", "latex", "machine"), default="text")
    p.set_defaults(run=cmd_catalogue)
    return ap


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.run(args, out)
    except CheckFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ResidualError, DivergedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (UsageError, ParseError, TableauError, ExcludedLocusError, KeyError,
            LinearSystemError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
