"""Command-line front end.

Exit codes: 0 for any computed answer (including negative verdicts), 1 for
usage mistakes, 2 for domain errors, which are reported as JSON on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from ..errors import PoissonForgeError
from ..parsing import parse_poly
from .commands import HANDLERS, UsageError

SCHEMA = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _structure_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--structure", metavar="FILE", help="structure JSON file")
    p.add_argument("--catalog", metavar="NAME", help="catalog entry, e.g. weyl2, sl2, family4")
    p.add_argument("--param", action="append", metavar="P", help="catalog parameter (repeatable)")
    p.add_argument("--bracket", action="append", metavar="EXPR", help="{x, y} = EXPR")
    p.add_argument("--gens", metavar="NAMES", help='comma-separated generator names, e.g. "x,y,t"')


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="poisson-forge", description="Exact computations with polynomial Poisson brackets.")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--jobs", type=int, default=1, metavar="N", help="worker processes for batches")
    # the same flags after the verb; SUPPRESS keeps the top-level value unless given
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, metavar="N")
    sub = parser.add_subparsers(dest="verb", metavar="VERB", parser_class=_Parser)
    sub.required = True

    def add(name: str, **kw) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], **kw)

    p = add("bracket", help="evaluate {F, G}")
    _structure_flags(p)
    p.add_argument("left", metavar="F")
    p.add_argument("right", metavar="G")

    p = add("jacobi", help="check the Jacobi identity on generator triples")
    _structure_flags(p)

    p = add("center", help="Poisson center up to a degree")
    _structure_flags(p)
    p.add_argument("--deg", type=int, default=3)

    p = add("ideal", help="test a Poisson ideal, or print the commutator ideal")
    _structure_flags(p)
    p.add_argument("polys", nargs="*", metavar="POLY")

    p = add("primes", help="principal Poisson primes up to a degree")
    _structure_flags(p)
    p.add_argument("--deg", type=int, default=2)

    for verb, what in (("classify2", "normal form of {x, y} = f on k[x, y]"),
                       ("classify3", "normal form of graded {x, y} = f on k[x, y, t], t central")):
        p = add(verb, help=what)
        p.add_argument("--bracket", action="append", metavar="EXPR", help="repeatable for batches")
        p.add_argument("--gens", metavar="NAMES")

    p = add("fingerprint", help="center, commutator ideal and principal primes")
    _structure_flags(p)
    p.add_argument("--central", metavar="NAME", help="central generator for the fiber at 1")

    p = add("ore", help="build an Ore tower or recognize an Ore extension")
    p.add_argument("action", choices=("build", "recognize"))
    _structure_flags(p)
    p.add_argument("--tower", metavar="FILE", help="tower JSON for build")
    p.add_argument("--var", metavar="NAME", help="generator to split off for recognize")

    p = add("catalog", help="emit a named structure")
    p.add_argument("name")
    p.add_argument("params", nargs="*")

    p = add("derivations", help="basis of Poisson derivations with bounded image degree")
    _structure_flags(p)
    p.add_argument("--deg", type=int, default=1)

    p = add("pml", help="bounded Poisson Makar-Limanov over-approximation")
    _structure_flags(p)
    p.add_argument("--deg", type=int, default=1, help="derivation image degree cap")
    p.add_argument("--nilpotence", type=int, default=8)
    p.add_argument("--kernel-deg", type=int, default=3)
    p.add_argument("--central", metavar="EXPR", help="keep only derivations killing EXPR")

    p = add("divisor", help="bounded divisor Poisson subalgebra of F (default F = 1)")
    _structure_flags(p)
    p.add_argument("polys", nargs="*", metavar="F")
    p.add_argument("--units", metavar="NAMES", help="generators treated as invertible")
    p.add_argument("--iterations", type=int, default=4)
    p.add_argument("--deg", type=int, default=4)

    p = add("stratiform", help="length of a declared chain")
    p.add_argument("chain", help='JSON list such as \'["finite", "ore"]\'')

    p = add("discriminant", help="parameters of a central generator with trivial fiber")
    _structure_flags(p)
    p.add_argument("--var", metavar="NAME", help="central generator (default: last)")
    return parser


# -- rendering -------------------------------------------------------------------

def _text(value, indent: int = 0) -> list[str]:
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for key in sorted(value):
            v = value[key]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{key}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(v)}")
        return lines
    if isinstance(value, list):
        lines = []
        for item in value:
            if isinstance(item, (dict, list)) and not _flat(item):
                lines.append(f"{pad}-")
                lines.extend(_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(item)}")
        return lines
    return [f"{pad}{_scalar(value)}"]


def _flat(v) -> bool:
    return isinstance(v, list) and all(isinstance(i, str) for i in v)


def _scalar(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(i) for i in v) + "]"
    if isinstance(v, dict):
        return "{}"
    return str(v)


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"schema": SCHEMA, **doc}, sort_keys=True, indent=2, ensure_ascii=False)
    return "\n".join(_text(doc))


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    try:
        doc = HANDLERS[args.verb](args)
    except UsageError as exc:
        print(f"poisson-forge {args.verb}: {exc}", file=sys.stderr)
        return 1
    except PoissonForgeError as exc:
        print(json.dumps({"schema": SCHEMA, **exc.to_json()}, sort_keys=True), file=sys.stderr)
        return 2
    print(render(doc, args.format))
    return 0


__all__ = ["main", "build_parser", "render", "parse_poly"]
