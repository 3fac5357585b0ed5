"""Buchberger's algorithm with inter-reduction, graded-lex order."""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import ArityMismatch
from .multipoly import Poly, _mono_div, _mono_divides, grlex_key, mono_lcm


def reduce(f: Poly, basis: Sequence[Poly]) -> Poly:
    """Full normal form of ``f`` modulo ``basis`` (every term reduced)."""
    leads = [(g.leading_monomial(), g.leading_coefficient().inverse(), g) for g in basis if g]
    p = f
    remainder: dict = {}
    while p.terms:
        m = p.leading_monomial()
        c = p.terms[m]
        for lm, lc_inv, g in leads:
            if _mono_divides(lm, m):
                p = p - g.mul_term(_mono_div(m, lm), c * lc_inv)
                break
        else:
            remainder[m] = c
            p = Poly._raw(p.nvars, {k: v for k, v in p.terms.items() if k != m})
    return Poly._raw(f.nvars, remainder)


def _spoly(f: Poly, g: Poly) -> Poly:
    mf, mg = f.leading_monomial(), g.leading_monomial()
    lcm = mono_lcm(mf, mg)
    a = f.mul_term(_mono_div(lcm, mf), f.leading_coefficient().inverse())
    b = g.mul_term(_mono_div(lcm, mg), g.leading_coefficient().inverse())
    return a - b


class GroebnerBasis:
    """A reduced Groebner basis: monic, inter-reduced, leading monomials descending."""

    __slots__ = ("generators", "nvars")

    order = "grlex"

    def __init__(self, generators: Sequence[Poly], nvars: int):
        self.generators = tuple(generators)
        self.nvars = nvars

    def is_zero_ideal(self) -> bool:
        return not self.generators

    def is_unit_ideal(self) -> bool:
        return any(g.is_constant() and g for g in self.generators)

    def reduce(self, f: Poly) -> Poly:
        return reduce(f, self.generators)

    def contains(self, f: Poly) -> bool:
        return not self.reduce(f).terms

    def __eq__(self, other) -> bool:
        return isinstance(other, GroebnerBasis) and self.generators == other.generators

    def __hash__(self) -> int:
        return hash(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def format(self, names: Sequence[str]) -> list[str]:
        return [g.format(names) for g in self.generators]

    def __repr__(self) -> str:
        return f"GroebnerBasis({[str(g) for g in self.generators]})"


def _interreduce(polys: list[Poly]) -> list[Poly]:
    polys = [p.monic() for p in polys if p]
    changed = True
    while changed:
        changed = False
        polys.sort(key=lambda p: grlex_key(p.leading_monomial()))
        out: list[Poly] = []
        for i, p in enumerate(polys):
            # replacing p by its remainder keeps the ideal unchanged
            others = out + polys[i + 1:]
            r = reduce(p, others).monic()
            if r != p:
                changed = True
            if r:
                out.append(r)
        polys = out
    polys.sort(key=lambda p: grlex_key(p.leading_monomial()), reverse=True)
    return polys


def groebner_basis(gens: Iterable[Poly], nvars: int | None = None) -> GroebnerBasis:
    gens = list(gens)
    if nvars is None:
        if not gens:
            raise ValueError("need at least one generator or an explicit variable count")
        nvars = gens[0].nvars
    if any(g.nvars != nvars for g in gens):
        raise ArityMismatch("generators live in rings of different sizes")
    basis = [g.monic() for g in gens if g]
    if any(g.is_constant() for g in basis):
        return GroebnerBasis([Poly.one(nvars)], nvars)
    basis = _interreduce(basis)
    pairs = [(i, j) for j in range(len(basis)) for i in range(j)]
    while pairs:
        i, j = pairs.pop()
        f, g = basis[i], basis[j]
        mf, mg = f.leading_monomial(), g.leading_monomial()
        # Buchberger's first criterion: coprime leading monomials
        if all(a == 0 or b == 0 for a, b in zip(mf, mg)):
            continue
        r = reduce(_spoly(f, g), basis)
        if r:
            if r.is_constant():
                return GroebnerBasis([Poly.one(nvars)], nvars)
            basis.append(r.monic())
            k = len(basis) - 1
            pairs.extend((a, k) for a in range(k))
    return GroebnerBasis(_interreduce(basis), nvars)


def ideal_member(f: Poly, gb: GroebnerBasis) -> bool:
    return gb.contains(f)
