"""Poisson derivations, alpha-derivations and Makar-Limanov style kernels."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from . import linalg
from .errors import AlphaNotPoisson, ArityMismatch, RequiresOracle
from .exactfield import elem
from .multipoly import Poly, grlex_key, monomials_up_to
from .pbracket import PoissonStructure, _kernel_basis, bracket


class PolyDerivation:
    """A derivation of ``k[x_1..x_n]`` fixed by the images of the generators.

    ``flags`` holds certificates: ``"poisson"``, ``("alpha_compatible", key)``
    and ``("lnd_within", n)``.  Flags are only attached by the checkers below.
    """

    __slots__ = ("images", "flags")

    def __init__(self, images: Sequence[Poly], flags: frozenset = frozenset()):
        self.images = tuple(images)
        n = len(self.images)
        if any(p.nvars != n for p in self.images):
            raise ArityMismatch("derivation images must live in a ring of the same size")
        self.flags = frozenset(flags)

    @property
    def nvars(self) -> int:
        return len(self.images)

    @classmethod
    def zero(cls, n: int) -> PolyDerivation:
        return cls([Poly.zero(n)] * n)

    @classmethod
    def euler(cls, n: int) -> PolyDerivation:
        return cls(Poly.gens(n))

    @classmethod
    def partial(cls, n: int, i: int) -> PolyDerivation:
        return cls([Poly.one(n) if k == i else Poly.zero(n) for k in range(n)])

    def __call__(self, f: Poly) -> Poly:
        if f.nvars != self.nvars:
            raise ArityMismatch("polynomial and derivation differ in variable count")
        out = Poly.zero(self.nvars)
        for i in f.variables():
            if self.images[i]:
                out = out + self.images[i] * f.diff(i)
        return out

    def iterate(self, f: Poly, k: int) -> Poly:
        for _ in range(k):
            if not f:
                break
            f = self(f)
        return f

    def is_zero(self) -> bool:
        return not any(self.images)

    def with_flag(self, flag) -> PolyDerivation:
        return PolyDerivation(self.images, self.flags | {flag})

    def lnd_bound(self) -> int | None:
        for f in self.flags:
            if isinstance(f, tuple) and f[0] == "lnd_within":
                return f[1]
        return None

    def __add__(self, other: PolyDerivation) -> PolyDerivation:
        return PolyDerivation([a + b for a, b in zip(self.images, other.images)])

    def scale(self, c) -> PolyDerivation:
        return PolyDerivation([p.scale(c) for p in self.images])

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyDerivation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def format(self, names: Sequence[str]) -> list[str]:
        return [f"{v} -> {p.format(names)}" for v, p in zip(names, self.images)]

    def to_json(self, names: Sequence[str]) -> dict:
        flags = []
        for f in sorted(self.flags, key=str):
            flags.append(f if isinstance(f, str) else [f[0], f[1] if isinstance(f[1], int) else str(f[1])])
        return {"images": [p.format(names) for p in self.images], "flags": flags}

    def __repr__(self) -> str:
        return f"PolyDerivation({[str(p) for p in self.images]})"


def _poisson_defect(P: PoissonStructure, alpha: PolyDerivation, i: int, j: int) -> Poly:
    xs = P.gens()
    return (alpha(P.entry(i, j)) - bracket(P, alpha.images[i], xs[j])
            - bracket(P, xs[i], alpha.images[j]))


def is_poisson_derivation(P: PoissonStructure, alpha: PolyDerivation) -> bool:
    """``alpha({a,b}) == {alpha(a), b} + {a, alpha(b)}`` on all generator pairs."""
    if alpha.nvars != P.n:
        raise ArityMismatch("derivation and structure differ in variable count")
    return all(not _poisson_defect(P, alpha, i, j) for i in range(P.n) for j in range(i + 1, P.n))


def certify_poisson(P: PoissonStructure, alpha: PolyDerivation) -> PolyDerivation | None:
    return alpha.with_flag("poisson") if is_poisson_derivation(P, alpha) else None


def _alpha_defect(P: PoissonStructure, delta: PolyDerivation, alpha: PolyDerivation, i: int, j: int) -> Poly:
    xs = P.gens()
    lhs = delta(P.entry(i, j))
    rhs = (bracket(P, delta.images[i], xs[j]) + bracket(P, xs[i], delta.images[j])
           + alpha.images[i] * delta.images[j] - delta.images[i] * alpha.images[j])
    return lhs - rhs


def is_poisson_alpha_derivation(P: PoissonStructure, delta: PolyDerivation, alpha: PolyDerivation) -> bool:
    """The twisted identity
    ``delta({a,b}) == {delta(a),b} + {a,delta(b)} + alpha(a) delta(b) - delta(a) alpha(b)``
    on all generator pairs.  Raises :class:`AlphaNotPoisson` if ``alpha`` fails.
    """
    if delta.nvars != P.n or alpha.nvars != P.n:
        raise ArityMismatch("derivation and structure differ in variable count")
    if not is_poisson_derivation(P, alpha):
        raise AlphaNotPoisson("alpha is not a Poisson derivation")
    return all(not _alpha_defect(P, delta, alpha, i, j) for i in range(P.n) for j in range(i + 1, P.n))


@dataclass(frozen=True)
class NilpotenceVerdict:
    nilpotent: bool
    order: int | None  # least n with delta^n(x_i) == 0, when nilpotent
    bound: int

    def __str__(self) -> str:
        return f"Yes({self.order})" if self.nilpotent else f"NoWithinBound({self.bound})"


def is_locally_nilpotent(delta: PolyDerivation, bound: int) -> NilpotenceVerdict:
    """Least ``n <= bound`` with ``delta^n`` killing every generator.

    Elements killed by a power of ``delta`` form a subalgebra, so this
    certifies local nilpotence on the whole ring.  Failure is inconclusive.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    current = list(Poly.gens(delta.nvars))
    for n in range(1, bound + 1):
        current = [delta(p) if p else p for p in current]
        if not any(current):
            return NilpotenceVerdict(True, n, bound)
    return NilpotenceVerdict(False, None, bound)


def certify_lnd(delta: PolyDerivation, bound: int) -> PolyDerivation | None:
    verdict = is_locally_nilpotent(delta, bound)
    return delta.with_flag(("lnd_within", verdict.order)) if verdict.nilpotent else None


def derivation_constraint_matrix(P: PoissonStructure, degree_cap: int):
    """Unknowns and linear constraints of the Poisson-derivation ansatz.

    Returns ``(unknowns, rows)``; unknown ``(i, m)`` is the coefficient of
    monomial ``m`` in the image of generator ``i``.
    """
    n = P.n
    monos = sorted(monomials_up_to(n, degree_cap), key=grlex_key, reverse=True)
    unknowns = [(i, m) for i in range(n) for m in monos]
    defects = []
    for i, m in unknowns:
        images = [Poly.monomial(m) if k == i else Poly.zero(n) for k in range(n)]
        d = PolyDerivation(images)
        defects.append([_poisson_defect(P, d, a, b) for a in range(n) for b in range(a + 1, n)])
    rows = []
    for r in range(n * (n - 1) // 2):
        support = sorted({mm for col in defects for mm in col[r].terms}, key=grlex_key)
        for mm in support:
            rows.append([col[r].coefficient(mm) for col in defects])
    return unknowns, rows


def solve_poisson_derivations(P: PoissonStructure, degree_cap: int) -> list[PolyDerivation]:
    """Basis of Poisson derivations whose images have degree at most ``degree_cap``."""
    if degree_cap < 0:
        raise ValueError("degree cap must be non-negative")
    n = P.n
    unknowns, rows = derivation_constraint_matrix(P, degree_cap)
    if rows:
        vectors = linalg.nullspace(rows, len(unknowns))
    else:
        vectors = [[elem(1) if c == k else elem(0) for c in range(len(unknowns))]
                   for k in range(len(unknowns))]
    out = []
    for vec in vectors:
        images = [dict() for _ in range(n)]
        for (i, m), c in zip(unknowns, vec):
            if c:
                images[i][m] = c
        out.append(PolyDerivation([Poly(n, t) for t in images], frozenset({"poisson"})))
    return out


def kernel_up_to_degree(derivations: Sequence[PolyDerivation], n: int, degree: int) -> list[Poly]:
    """Basis of ``{z : deg z <= degree, delta(z) == 0 for every delta}``."""
    monos = monomials_up_to(n, degree)
    if not derivations:
        basis = [Poly.monomial(m) for m in monos]
        basis.sort(key=lambda b: grlex_key(b.leading_monomial()))
        return basis
    images = [[d(Poly.monomial(m)) for d in derivations] for m in monos]
    return _kernel_basis(images, monos, n)


@dataclass(frozen=True)
class PMLResult:
    basis: list
    derivations: list
    rigid_within_bounds: bool
    derivation_degree_cap: int
    nilpotence_bound: int
    kernel_degree_cap: int
    central_element: Poly | None = None
    note: str = field(default="over-approximation: only derivations found within the caps are intersected")


def pml_over_approximation(P: PoissonStructure, derivation_degree_cap: int, nilpotence_bound: int,
                           kernel_degree_cap: int, central_element: Poly | None = None) -> PMLResult:
    """Degree-bounded over-approximation of the Poisson Makar-Limanov invariant.

    Solver bases for every image cap ``0..D`` are pooled so that raising a cap
    can only add derivations.  Each basis derivation certified locally
    nilpotent within the bound is kept; with ``central_element`` only those
    killing it are kept.  The kernel intersection of the kept derivations is
    returned up to ``kernel_degree_cap``.
    """
    if min(derivation_degree_cap, nilpotence_bound, kernel_degree_cap) < 0 or nilpotence_bound < 1:
        raise ValueError("caps must be positive")
    pool: list[PolyDerivation] = []
    for cap in range(derivation_degree_cap + 1):
        for d in solve_poisson_derivations(P, cap):
            if d not in pool:
                pool.append(d)
    kept = []
    for d in pool:
        if d.is_zero():
            continue
        if central_element is not None and d(central_element):
            continue
        cert = certify_lnd(d, nilpotence_bound)
        if cert is not None:
            kept.append(cert)
    basis = kernel_up_to_degree(kept, P.n, kernel_degree_cap)
    return PMLResult(basis, kept, not kept, derivation_degree_cap, nilpotence_bound,
                     kernel_degree_cap, central_element)


@dataclass(frozen=True)
class FactorialVerdict:
    passed: bool
    checked: int
    witness: tuple | None = None


def factorially_closed_check(delta: PolyDerivation, trials: int = 20, seed: int = 0,
                             degree: int = 2) -> FactorialVerdict:
    """Sample products ``a*b`` with ``delta(a*b) == 0`` and check both factors die.

    Pairs come from three sources: products of random kernel elements, the
    bounded factorizations of kernel elements, and adversarial pairs (kernel
    times non-kernel), which must have ``delta(a*b) != 0``.
    """
    from .factor import factor_bounded

    if delta.lnd_bound() is None and certify_lnd(delta, 16) is None:
        raise ValueError("factorial closedness is only guaranteed for locally nilpotent derivations")
    n = delta.nvars
    rng = random.Random(seed)
    kernel = [z for z in kernel_up_to_degree([delta], n, degree) if not z.is_constant()]
    non_kernel = [Poly.monomial(m) for m in monomials_up_to(n, degree) if delta(Poly.monomial(m))]
    checked = 0

    def combo() -> Poly:
        out = Poly.const(n, rng.randint(-3, 3))
        for z in kernel:
            out = out + z.scale(rng.randint(-2, 2))
        return out

    for _ in range(trials):
        if kernel:
            a, b = combo(), combo()
            if a and b:
                checked += 1
                if not delta(a * b) and (delta(a) or delta(b)):
                    return FactorialVerdict(False, checked, (a, b))
            z = combo()
            if z and not z.is_constant():
                try:
                    factors = factor_bounded(z).factors
                except RequiresOracle:
                    factors = []
                for g, _ in factors:
                    checked += 1
                    if delta(g):
                        return FactorialVerdict(False, checked, (z, g))
        if non_kernel:
            u = rng.choice(non_kernel)
            a = combo() if kernel else Poly.one(n)
            if a:
                prod_ = a * u
                checked += 1
                if not delta(prod_):
                    return FactorialVerdict(False, checked, (a, u))
    return FactorialVerdict(True, checked)
