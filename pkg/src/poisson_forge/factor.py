"""Bounded factorization over the quadratic closure.

Factors are irreducible over the algebraic closure, with roots adjoined to
the coefficient tower on demand.  Supported shapes: monomial content times
either a univariate polynomial of degree at most 4 whose roots are reachable
by square roots, or a polynomial of total degree at most 2 (split by the rank
of its homogenized quadratic form).  Anything else raises
:class:`RequiresOracle`.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import NamedTuple

from . import linalg
from .errors import RequiresOracle
from .exactfield import FieldElem, elem, sqrt_or_adjoin
from .multipoly import Poly, divmod_single, grlex_key


class Factorization(NamedTuple):
    factors: list  # list[tuple[Poly, int]], monic irreducible factors
    unit: FieldElem

    def expand(self, nvars: int) -> Poly:
        out = Poly.const(nvars, self.unit)
        for f, k in self.factors:
            out = out * f ** k
        return out


def factor_bounded(f: Poly) -> Factorization:
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    n = f.nvars
    found: list[Poly] = []
    content = tuple(min(m[i] for m in f.terms) for i in range(n))
    for i, k in enumerate(content):
        found.extend([Poly.var(n, i)] * k)
    rest = Poly(n, {tuple(a - b for a, b in zip(m, content)): c for m, c in f.terms.items()}).monic()
    if not rest.is_constant():
        found.extend(_factor_primitive(rest))
    factors: list[tuple[Poly, int]] = []
    for g in found:
        g = g.monic()
        for idx, (h, k) in enumerate(factors):
            if h == g:
                factors[idx] = (h, k + 1)
                break
        else:
            factors.append((g, 1))
    factors.sort(key=lambda fk: (fk[0].total_degree(), [grlex_key(m) for m, _ in fk[0].sorted_terms()],
                                str(fk[0])))
    return Factorization(factors, _fix_unit(f, factors))


def _fix_unit(f: Poly, factors: list[tuple[Poly, int]]) -> FieldElem:
    prod_ = Poly.one(f.nvars)
    for g, k in factors:
        prod_ = prod_ * g ** k
    q, r = divmod_single(f, prod_)
    if r or not q.is_constant():
        raise AssertionError("factorization does not multiply back")
    return q.constant_term()


def _factor_primitive(g: Poly) -> list[Poly]:
    """Factors of a monic polynomial without monomial content."""
    vs = g.variables()
    if g.total_degree() == 1:
        return [g]
    if len(vs) == 1:
        return _factor_univariate(g, vs[0])
    if g.total_degree() == 2:
        return _factor_quadric(g)
    raise RequiresOracle(g)


# -- univariate ---------------------------------------------------------------

def _coeffs(g: Poly, v: int) -> list[FieldElem]:
    """Coefficients ``[c_0, ..., c_d]`` of a polynomial in generator ``v`` only."""
    d = g.degree_in(v)
    out = [elem(0)] * (d + 1)
    for m, c in g.terms.items():
        out[m[v]] = c
    return out


def _from_coeffs(cs: list, n: int, v: int) -> Poly:
    terms = {}
    for k, c in enumerate(cs):
        e = [0] * n
        e[v] = k
        terms[tuple(e)] = c
    return Poly(n, terms)


def _linear(n: int, v: int, root: FieldElem) -> Poly:
    return Poly.var(n, v) - root


def _quadratic_roots(b: FieldElem, c: FieldElem) -> tuple[FieldElem, FieldElem]:
    """Roots of ``z^2 + b z + c``."""
    disc = b * b - c * 4
    s, _ = sqrt_or_adjoin(disc)
    return (-b + s) / 2, (-b - s) / 2


def _rational_roots(cs: list[FieldElem]) -> list[Fraction]:
    if not all(c.is_rational() for c in cs):
        return []
    qs = [c.to_fraction() for c in cs]
    lcm = 1
    for q in qs:
        lcm = lcm * q.denominator // _gcd(lcm, q.denominator)
    ints = [int(q * lcm) for q in qs]
    while ints and ints[0] == 0:
        ints = ints[1:]
    if not ints:
        return []
    a0, ad = abs(ints[0]), abs(ints[-1])
    roots = []
    for p, q in product(_divisors(a0), _divisors(ad)):
        for r in (Fraction(p, q), Fraction(-p, q)):
            if r not in roots and sum(c * r ** k for k, c in enumerate(ints)) == 0:
                roots.append(r)
    return roots


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _divisors(k: int) -> list[int]:
    if k > 10 ** 6:
        return []
    return [d for d in range(1, k + 1) if k % d == 0]


def _factor_univariate(g: Poly, v: int) -> list[Poly]:
    n = g.nvars
    cs = _coeffs(g, v)
    d = len(cs) - 1
    if d == 1:
        return [g]
    if d == 2:
        r1, r2 = _quadratic_roots(cs[1], cs[0])
        return [_linear(n, v, r1), _linear(n, v, r2)]
    if d > 4:
        raise RequiresOracle(g)
    for r in _rational_roots(cs):
        lin = _linear(n, v, elem(r))
        q, rem = divmod_single(g, lin)
        if not rem:
            return [lin] + _factor_univariate(q, v)
    if d == 4:
        # depress: z = w - c3/4, then look for a biquadratic w^4 + p w^2 + q
        shift = cs[3] / 4
        w = Poly.var(n, v)
        images = [Poly.var(n, i) for i in range(n)]
        images[v] = w - shift
        dep = g.compose(images)
        dc = _coeffs(dep, v)
        if dc[1].is_zero() and dc[3].is_zero():
            y1, y2 = _quadratic_roots(dc[2], dc[0])
            s1, tower = sqrt_or_adjoin(y1)
            # take the second root inside the first tower to avoid sibling towers
            s2, _ = sqrt_or_adjoin(y2.embed(tower) if y2.tower.is_prefix_of(tower) else y2)
            roots = [s1 - shift, -s1 - shift, s2 - shift, -s2 - shift]
            return [_linear(n, v, r) for r in roots]
    raise RequiresOracle(g)


# -- quadrics -------------------------------------------------------------

def _sym_matrix(q: Poly) -> list[list[FieldElem]]:
    """Symmetric matrix ``S`` of a quadratic form with ``q = v^T S v``."""
    n = q.nvars
    s = [[elem(0)] * n for _ in range(n)]
    for m, c in q.terms.items():
        idx = [i for i, k in enumerate(m) for _ in range(k)]
        i, j = idx
        if i == j:
            s[i][i] = c
        else:
            s[i][j] = c / 2
            s[j][i] = c / 2
    return s


def _factor_quadric(g: Poly) -> list[Poly]:
    n = g.nvars
    h = g.insert_variable(n)  # homogenizing variable is the last one
    hom = Poly(n + 1, {m[:n] + (2 - sum(m[:n]),): c for m, c in h.terms.items()})
    if linalg.rank(_sym_matrix(hom), n + 1) >= 3:
        return [g]
    lin = _split_rank2(hom)
    out = []
    for form in lin:
        deh = form.partial_evaluate(n, 1).drop_variable(n)
        if not deh.is_constant():
            out.append(deh)
    return out


def _split_rank2(q: Poly) -> list[Poly]:
    """Two linear forms whose product is ``q`` up to a scalar (rank <= 2)."""
    n = q.nvars
    s = _sym_matrix(q)
    diag = [i for i in range(n) if not s[i][i].is_zero()]
    if not diag:
        i, j = next((i, j) for i in range(n) for j in range(n) if i != j and not s[i][j].is_zero())
        images = Poly.gens(n)
        images[i] = images[i] + images[j]
        back = Poly.gens(n)
        back[i] = back[i] - back[j]
        return [f.compose(back) for f in _split_rank2(q.compose(images))]
    i = diag[0]
    a = s[i][i]
    vi = Poly.var(n, i)
    b = Poly(n, {}) + sum((Poly.var(n, j).scale(s[i][j] * 2) for j in range(n) if j != i), Poly.zero(n))
    c = q - vi * vi * a - vi * b
    d = b * b - c.scale(a * 4)
    if not d:
        root = vi + b.scale((a * 2).inverse())
        return [root, root]
    ds = _sym_matrix(d)
    k = next(k for k in range(n) if not ds[k][k].is_zero())
    kappa = ds[k][k]
    m = sum((Poly.var(n, j).scale(ds[k][j] / kappa) for j in range(n)), Poly.zero(n))
    sq, _ = sqrt_or_adjoin(kappa)
    inv2a = (a * 2).inverse()
    return [vi + (b - m.scale(sq)).scale(inv2a), vi + (b + m.scale(sq)).scale(inv2a)]


def is_irreducible(f: Poly) -> bool:
    fac = factor_bounded(f)
    return len(fac.factors) == 1 and fac.factors[0][1] == 1 and not f.is_constant()
