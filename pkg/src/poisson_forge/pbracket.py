"""Poisson structures on polynomial rings and the invariants built on them.

A structure on ``k[x_1..x_n]`` is fixed by the upper-triangular table
``p_ij = {x_i, x_j}``; every other bracket follows from the biderivation
expansion ``{f, g} = sum_{i<j} p_ij (f_i g_j - f_j g_i)`` where ``f_i`` is
the partial derivative.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

from . import linalg
from .errors import (
    ArityMismatch,
    DegreeCapExceeded,
    FactorizationUnavailable,
    NotAPoissonIdeal,
    NotCentral,
    NotGraded,
    RequiresOracle,
    ZeroDenominator,
)
from .exactfield import Scalar, elem
from .groebner import GroebnerBasis, groebner_basis
from .multipoly import Poly, Substitution, divides, divmod_single, grlex_key, monomials_up_to

DEFAULT_DEGREE_CAP = 8


def default_degree_cap() -> int:
    """Cap for saturating searches; ``POISSON_FORGE_DEGREE_CAP`` overrides it."""
    raw = os.environ.get("POISSON_FORGE_DEGREE_CAP")
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"POISSON_FORGE_DEGREE_CAP must be an integer, got {raw!r}") from None
        if value < 1:
            raise ValueError("POISSON_FORGE_DEGREE_CAP must be positive")
        return value
    return DEFAULT_DEGREE_CAP


JACOBI_STATES = ("verified", "failed", "unchecked")


class PoissonStructure:
    """Generators plus the bracket table ``{x_i, x_j}`` for ``i < j``."""

    __slots__ = ("names", "table", "jacobi")

    def __init__(self, names: Sequence[str], table: Mapping[tuple[int, int], Poly] | None = None,
                 jacobi: str = "unchecked"):
        self.names = tuple(names)
        n = len(self.names)
        if len(set(self.names)) != n:
            raise ValueError("generator names must be distinct")
        if jacobi not in JACOBI_STATES:
            raise ValueError(f"unknown Jacobi state {jacobi!r}")
        full = {}
        for i, j in combinations(range(n), 2):
            full[(i, j)] = Poly.zero(n)
        for (i, j), p in (table or {}).items():
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise ArityMismatch(f"bad table index ({i}, {j})")
            if p.nvars != n:
                raise ArityMismatch(f"table entry has {p.nvars} variables, expected {n}")
            if i < j:
                full[(i, j)] = p
            else:
                full[(j, i)] = -p
        self.table = full
        self.jacobi = jacobi

    @property
    def n(self) -> int:
        return len(self.names)

    def entry(self, i: int, j: int) -> Poly:
        """``{x_i, x_j}`` for any pair of indices."""
        if i == j:
            return Poly.zero(self.n)
        return self.table[(i, j)] if i < j else -self.table[(j, i)]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ArityMismatch(f"no generator named {name!r}") from None

    @property
    def grading_class(self) -> str:
        entries = [p for p in self.table.values() if p]
        if not entries:
            return "zero"
        if all(p.is_homogeneous(2) for p in entries):
            return "quadratic"
        if all(p.total_degree() <= 2 for p in entries):
            return "filtered_quadratic"
        return "general"

    def with_jacobi(self, state: str) -> PoissonStructure:
        return PoissonStructure(self.names, self.table, state)

    def gens(self) -> list[Poly]:
        return Poly.gens(self.n)

    def parse(self, src: str) -> Poly:
        from .parsing import parse_poly
        return parse_poly(src, self.names)

    def format(self, f: Poly) -> str:
        return f.format(self.names)

    def nonzero_entries(self) -> list[tuple[int, int, Poly]]:
        return [(i, j, p) for (i, j), p in sorted(self.table.items()) if p]

    def __eq__(self, other) -> bool:
        return (isinstance(other, PoissonStructure) and self.names == other.names
                and self.table == other.table)

    def __hash__(self) -> int:
        return hash((self.names, tuple(sorted(self.table.items(), key=lambda kv: kv[0]))))

    def __repr__(self) -> str:
        body = ", ".join(f"{{{self.names[i]},{self.names[j]}}}={self.format(p)}"
                         for i, j, p in self.nonzero_entries())
        return f"PoissonStructure([{', '.join(self.names)}]; {body or 'trivial'})"

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "generators": list(self.names),
            "table": [[self.names[i], self.names[j], self.format(p)]
                      for (i, j), p in sorted(self.table.items()) if p],
            "flags": {"jacobi": self.jacobi, "grading": self.grading_class},
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> PoissonStructure:
        from .parsing import parse_poly
        names = list(doc["generators"])
        table = {}
        for a, b, text in doc.get("table", []):
            table[(names.index(a), names.index(b))] = parse_poly(text, names)
        flags = doc.get("flags", {})
        return cls(names, table, flags.get("jacobi", "unchecked"))


def structure_2var(f: Poly, names: Sequence[str] = ("x", "y")) -> PoissonStructure:
    """``k[x, y]`` with ``{x, y} = f``."""
    return PoissonStructure(names, {(0, 1): f}, "verified")


def structure_3var(f: Poly, names: Sequence[str] = ("x", "y", "t")) -> PoissonStructure:
    """``k[x, y, t]`` with ``{x, y} = f`` and ``t`` central."""
    return PoissonStructure(names, {(0, 1): f}, "verified")


# --------------------------------------------------------------------------
# bracket and Jacobi
# --------------------------------------------------------------------------

def _check(P: PoissonStructure, *polys: Poly) -> None:
    for f in polys:
        if f.nvars != P.n:
            raise ArityMismatch(f"polynomial in {f.nvars} variables, structure has {P.n}")


def bracket(P: PoissonStructure, f: Poly, g: Poly) -> Poly:
    _check(P, f, g)
    n = P.n
    fv, gv = f.variables(), g.variables()
    if not fv or not gv:
        return Poly.zero(n)
    df = {i: f.diff(i) for i in fv}
    dg = {i: g.diff(i) for i in gv}
    result = Poly.zero(n)
    for (i, j), p in P.table.items():
        if not p:
            continue
        term = Poly.zero(n)
        if i in df and j in dg:
            term = term + df[i] * dg[j]
        if j in df and i in dg:
            term = term - df[j] * dg[i]
        if term:
            result = result + p * term
    return result


def jacobiator(P: PoissonStructure, f: Poly, g: Poly, h: Poly) -> Poly:
    return (bracket(P, f, bracket(P, g, h)) + bracket(P, g, bracket(P, h, f))
            + bracket(P, h, bracket(P, f, g)))


@dataclass(frozen=True)
class JacobiVerdict:
    status: str  # "verified" or "failed"
    witness: tuple[str, str, str] | None
    value: Poly | None
    structure: PoissonStructure

    @property
    def ok(self) -> bool:
        return self.status == "verified"


def verify_jacobi(P: PoissonStructure) -> JacobiVerdict:
    """Evaluate the jacobiator on every generator triple ``i < j < k``."""
    gens = P.gens()
    for i, j, k in combinations(range(P.n), 3):
        value = jacobiator(P, gens[i], gens[j], gens[k])
        if value:
            return JacobiVerdict("failed", (P.names[i], P.names[j], P.names[k]), value,
                                 P.with_jacobi("failed"))
    return JacobiVerdict("verified", None, None, P.with_jacobi("verified"))


# --------------------------------------------------------------------------
# centers and ideals
# --------------------------------------------------------------------------

def _kernel_basis(images: list[list[Poly]], monos: list[tuple], nvars: int) -> list[Poly]:
    """Basis of combinations of ``monos`` whose images all vanish.

    ``images[k]`` lists the images of ``monos[k]`` under each of the linear maps.
    Columns are ordered by descending grlex so each basis vector has a
    distinct leading monomial; the basis is returned ascending.
    """
    order = sorted(range(len(monos)), key=lambda k: grlex_key(monos[k]), reverse=True)
    rows = []
    nmaps = len(images[0]) if images else 0
    for r in range(nmaps):
        support = sorted({m for k in order for m in images[k][r].terms}, key=grlex_key)
        for m in support:
            rows.append([images[k][r].coefficient(m) for k in order])
    if not rows:
        vectors = [[elem(1) if c == k else elem(0) for c in range(len(order))] for k in range(len(order))]
    else:
        vectors = linalg.nullspace(rows, len(order))
    basis = [Poly(nvars, {monos[order[c]]: v for c, v in enumerate(vec)}) for vec in vectors]
    basis = [b.monic() for b in basis]
    basis.sort(key=lambda b: grlex_key(b.leading_monomial()))
    return basis


def center_up_to_degree(P: PoissonStructure, degree: int) -> list[Poly]:
    if degree < 0:
        raise ValueError("degree must be non-negative")
    gens = P.gens()
    monos = monomials_up_to(P.n, degree)
    images = [[bracket(P, Poly.monomial(m), x) for x in gens] for m in monos]
    return _kernel_basis(images, monos, P.n)


def is_central(P: PoissonStructure, z: Poly) -> bool:
    return all(not bracket(P, z, x) for x in P.gens())


def commutator_ideal(P: PoissonStructure, degree_cap: int | None = None) -> GroebnerBasis:
    """The Poisson ideal generated by all table entries.

    Generators are added as ``{g, x_i}`` for ``g`` in the current Groebner
    basis until every such bracket reduces to zero.  Raises
    :class:`DegreeCapExceeded` if a basis element exceeds the cap first.
    """
    return poisson_closure(P, [p for p in P.table.values() if p], degree_cap)


def poisson_closure(P: PoissonStructure, gens: Sequence[Poly], degree_cap: int | None = None) -> GroebnerBasis:
    cap = degree_cap if degree_cap is not None else default_degree_cap()
    xs = P.gens()
    gb = groebner_basis(gens, P.n)
    while True:
        if any(g.total_degree() > cap for g in gb):
            raise DegreeCapExceeded(f"Poisson closure not stable within degree {cap}")
        extra = []
        for g in gb:
            for x in xs:
                r = gb.reduce(bracket(P, g, x))
                if r:
                    extra.append(r)
        if not extra:
            return gb
        gb = groebner_basis(list(gb.generators) + extra, P.n)


def is_poisson_ideal(P: PoissonStructure, gens: Sequence[Poly]) -> bool:
    if not gens:
        raise ValueError("an ideal needs at least one generator")
    if any(not g for g in gens):
        raise ValueError("zero generators are not accepted")
    _check(P, *gens)
    gb = groebner_basis(gens, P.n)
    xs = P.gens()
    return all(gb.contains(bracket(P, g, x)) for g in gens for x in xs)


def principal_poisson_primes(P: PoissonStructure, degree_cap: int = 2) -> list[Poly]:
    """Monic irreducible divisors ``f`` of table entries with ``(f)`` a Poisson ideal.

    Sound but not complete: only divisors of table entries are candidates.
    """
    from .factor import factor_bounded

    if degree_cap < 1:
        raise ValueError("degree cap must be at least 1")
    candidates: list[Poly] = []
    for _, _, p in P.nonzero_entries():
        try:
            factors, _ = factor_bounded(p)
        except RequiresOracle as exc:
            raise FactorizationUnavailable(
                f"table entry {P.format(p)} is outside the bounded factorizer") from exc
        for f, _ in factors:
            if f.total_degree() <= degree_cap and f not in candidates:
                candidates.append(f)
    xs = P.gens()
    primes = [f for f in candidates if all(divides(f, bracket(P, f, x)) for x in xs)]
    primes.sort(key=lambda f: (f.total_degree(), P.format(f)))
    return primes


class QuotientStructure:
    """``P`` paired with a Poisson ideal; brackets are reduced to normal form."""

    def __init__(self, P: PoissonStructure, gb: GroebnerBasis):
        self.structure = P
        self.ideal = gb

    def reduce(self, f: Poly) -> Poly:
        return self.ideal.reduce(f)

    def bracket(self, f: Poly, g: Poly) -> Poly:
        return self.reduce(bracket(self.structure, f, g))

    def table(self) -> dict[tuple[int, int], Poly]:
        return {k: self.reduce(p) for k, p in self.structure.table.items()}


def quotient_bracket(P: PoissonStructure, gens: Sequence[Poly]) -> QuotientStructure:
    if not is_poisson_ideal(P, gens):
        raise NotAPoissonIdeal("the generators do not span a Poisson ideal")
    return QuotientStructure(P, groebner_basis(gens, P.n))


# --------------------------------------------------------------------------
# fibers over a central generator
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FiberDescription:
    central_variable: int
    parameter: object  # FieldElem


def _require_central(P: PoissonStructure, var: int) -> None:
    if not 0 <= var < P.n:
        raise ArityMismatch(f"generator index {var} out of range")
    if not is_central(P, Poly.var(P.n, var)):
        raise NotCentral(f"{P.names[var]} is not Poisson central")


def fiber(P: PoissonStructure, var: int, alpha: Scalar) -> QuotientStructure:
    """``A/(var - alpha)`` for a central generator ``var``."""
    _require_central(P, var)
    return quotient_bracket(P, [Poly.var(P.n, var) - elem(alpha)])


def fiber_structure(P: PoissonStructure, var: int, alpha: Scalar) -> PoissonStructure:
    """The fiber at ``var = alpha`` as a structure on the remaining generators."""
    _require_central(P, var)
    alpha = elem(alpha)
    keep = [i for i in range(P.n) if i != var]
    table = {}
    for a, i in enumerate(keep):
        for b, j in enumerate(keep):
            if a < b:
                table[(a, b)] = P.entry(i, j).partial_evaluate(var, alpha).drop_variable(var)
    return PoissonStructure([P.names[i] for i in keep], table)


def univariate_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd of polynomials in (at most) one common variable."""
    while g:
        f, g = g, divmod_single(f, g)[1]
    return f.monic()


def squarefree_part(f: Poly, var: int) -> Poly:
    if not f or f.is_constant():
        return f.monic()
    g = univariate_gcd(f, f.diff(var))
    return divmod_single(f, g)[0].monic()


def trivial_fiber_discriminant(P: PoissonStructure, var: int) -> Poly:
    """Generator of the ideal of parameters ``alpha`` whose fiber bracket vanishes.

    The result is a polynomial in the generator ``var``: ``0`` if every fiber
    is trivial and ``1`` if none is.
    """
    _require_central(P, var)
    g = Poly.zero(P.n)
    for _, _, p in P.nonzero_entries():
        for c in _coefficients_over(p, var):
            g = univariate_gcd(g, c) if g else c.monic()
    if not g:
        return g
    return squarefree_part(g, var)


def _coefficients_over(p: Poly, var: int) -> list[Poly]:
    """Coefficients of ``p`` in the generators other than ``var``, as polynomials in ``var``."""
    groups: dict[tuple, dict] = {}
    for m, c in p.terms.items():
        rest = m[:var] + (0,) + m[var + 1:]
        own = tuple(m[var] if i == var else 0 for i in range(len(m)))
        groups.setdefault(rest, {})[own] = c
    return [Poly(p.nvars, terms) for _, terms in sorted(groups.items())]


# --------------------------------------------------------------------------
# Veronese subalgebras
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class VeroneseVerdict:
    closed: bool
    witness: tuple[Poly, Poly, Poly] | None = None


def veronese_closure_check(P: PoissonStructure, degree: int, degree_cap: int) -> VeroneseVerdict:
    """Check that brackets of homogeneous pieces of degrees ``k*degree`` and ``l*degree`` are homogeneous of degree ``(k+l)*degree``."""
    if degree < 1:
        raise ValueError("degree must be positive")
    if P.grading_class not in ("quadratic", "zero"):
        raise NotGraded("Veronese closure needs a graded (quadratic) bracket")
    from .multipoly import monomials_of_degree

    levels = [(k * degree, [Poly.monomial(m) for m in monomials_of_degree(P.n, k * degree)])
              for k in range(1, degree_cap // degree + 1)]
    for da, ma in levels:
        for db, mb in levels:
            for a in ma:
                for b in mb:
                    value = bracket(P, a, b)
                    if value and not value.is_homogeneous(da + db):
                        return VeroneseVerdict(False, (a, b, value))
    return VeroneseVerdict(True)


# --------------------------------------------------------------------------
# localization
# --------------------------------------------------------------------------

def fraction_bracket(P: PoissonStructure, left: tuple[Poly, Poly], right: tuple[Poly, Poly]) -> tuple[Poly, Poly]:
    """``{a/s, b/t}`` as a numerator and monic denominator."""
    a, s = left
    b, t = right
    if not s or not t:
        raise ZeroDenominator("fraction with zero denominator")
    num = (s * t * bracket(P, a, b) - a * t * bracket(P, s, b)
           - b * s * bracket(P, a, t) + a * b * bracket(P, s, t))
    den = s * s * t * t
    return _cancel(num, den, [s, t])


def _cancel(num: Poly, den: Poly, hints: Sequence[Poly]) -> tuple[Poly, Poly]:
    if not num:
        return Poly.zero(num.nvars), Poly.one(num.nvars)
    for h in hints:
        if h.is_constant():
            continue
        while True:
            qn, rn = divmod_single(num, h)
            qd, rd = divmod_single(den, h)
            if rn or rd:
                break
            num, den = qn, qd
    lc = den.leading_coefficient().inverse()
    return num.scale(lc), den.scale(lc)


def fractions_equal(f: tuple[Poly, Poly], g: tuple[Poly, Poly]) -> bool:
    return f[0] * g[1] == g[0] * f[1]


# --------------------------------------------------------------------------
# changes of variables
# --------------------------------------------------------------------------

def transport(P: PoissonStructure, s: Substitution) -> PoissonStructure:
    """The bracket on the new generators induced by ``s``.

    With ``D`` the Jacobian of the old generators in the new ones, the table
    matrix transforms as ``D^-1 * s(Pi) * D^-T``.  ``det D`` is a nonzero
    constant, so the inverse is the adjugate scaled by a field element.
    """
    n = P.n
    if s.nvars != n:
        raise ArityMismatch("substitution and structure differ in variable count")
    pi = [[s.apply(P.entry(i, j)) for j in range(n)] for i in range(n)]
    d = s.jacobian()
    det = s.jacobian_det().constant_term()
    adj = linalg.adjugate(d)
    inv = [[e.scale(det.inverse()) for e in row] for row in adj]
    table = {}
    for i, j in combinations(range(n), 2):
        total = Poly.zero(n)
        for k in range(n):
            if not inv[i][k]:
                continue
            for m in range(n):
                if inv[j][m] and pi[k][m]:
                    total = total + inv[i][k] * pi[k][m] * inv[j][m]
        table[(i, j)] = total
    return PoissonStructure(P.names, table, P.jacobi)


def transport_2var(f: Poly, s: Substitution) -> Poly:
    """Bracket polynomial ``{x', y'}`` after substituting ``s`` into ``{x, y} = f``."""
    return transport(structure_2var(f), s).entry(0, 1)
