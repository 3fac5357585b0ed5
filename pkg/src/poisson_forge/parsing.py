"""Recursive-descent parser for the polynomial text grammar.

Grammar::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ('^' integer)?
    atom   := integer | name | 'sqrt' '(' expr ')' | '(' expr ')'

Division is allowed only by nonzero constants, and ``sqrt`` only of constants;
``sqrt`` adjoins a root on demand.  The printer in :mod:`multipoly` emits a
subset of this grammar, so printed text always parses back.
"""

from __future__ import annotations

import re
from typing import Sequence

from .errors import PolySyntaxError, UnknownGenerator
from .exactfield import FieldElem, sqrt_or_adjoin
from .multipoly import Poly

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9']*)|(\S))")


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:  # only trailing whitespace left
            break
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise PolySyntaxError(f"unexpected character {ch!r}", m.start(3))
            tokens.append(("op", ch, m.start(3)))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str, generators: Sequence[str]):
        self.tokens = _tokenize(src)
        self.i = 0
        self.gens = list(generators)
        self.index = {g: k for k, g in enumerate(self.gens)}
        self.n = len(self.gens)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, text, pos = self.take()
        if text != value or kind != "op":
            raise PolySyntaxError(f"expected {value!r}", pos)

    def parse(self) -> Poly:
        result = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise PolySyntaxError(f"unexpected {text!r}", pos)
        return result

    def expr(self) -> Poly:
        kind, text, _ = self.peek()
        sign = 1
        if kind == "op" and text in "+-":
            self.take()
            sign = -1 if text == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.take()
                rhs = self.term()
                acc = acc + rhs if text == "+" else acc - rhs
            else:
                return acc

    def term(self) -> Poly:
        acc = self.factor()
        while True:
            kind, text, pos = self.peek()
            if kind == "op" and text in "*/":
                self.take()
                rhs = self.factor()
                if text == "*":
                    acc = acc * rhs
                else:
                    if not rhs.is_constant() or rhs.is_zero():
                        raise PolySyntaxError("division by a non-constant or zero", pos)
                    acc = acc.scale(rhs.constant_term().inverse())
            else:
                return acc

    def factor(self) -> Poly:
        base = self.atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.take()
            kind, text, pos = self.take()
            if kind != "int":
                raise PolySyntaxError("exponent must be a non-negative integer", pos)
            return base ** int(text)
        return base

    def atom(self) -> Poly:
        kind, text, pos = self.take()
        if kind == "int":
            return Poly.const(self.n, int(text))
        if kind == "name":
            if text == "sqrt":
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                if not inner.is_constant():
                    raise PolySyntaxError("sqrt of a non-constant", pos)
                root, _ = sqrt_or_adjoin(inner.constant_term())
                return Poly.const(self.n, root)
            if text == "i" and text not in self.index:
                root, _ = sqrt_or_adjoin(-1)
                return Poly.const(self.n, root)
            if text not in self.index:
                raise UnknownGenerator(f"unknown generator {text!r} at position {pos}")
            return Poly.var(self.n, self.index[text])
        if kind == "op" and text == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "end":
            raise PolySyntaxError("unexpected end of input", pos)
        raise PolySyntaxError(f"unexpected {text!r}", pos)


def parse_poly(src: str, generators: Sequence[str]) -> Poly:
    """Parse ``src`` into a polynomial in the ordered ``generators``."""
    return _Parser(src, generators).parse()


def parse_scalar(src: str) -> FieldElem:
    p = parse_poly(src, [])
    return p.constant_term()
