"""Divisor subalgebras, subwords, transcendence-degree bookkeeping and stratiform lengths."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from . import linalg
from .errors import FactorizationUnavailable, RequiresOracle
from .factor import Factorization, factor_bounded, is_irreducible
from .multipoly import Poly, grlex_key, monomials_up_to
from .pbracket import PoissonStructure, bracket, is_poisson_ideal
from .pderiv import PolyDerivation, is_poisson_derivation

UNIT_KINDS = ("constants_only", "monomial_units")


@dataclass(frozen=True)
class UnitGroupSpec:
    """Units of the ambient ring: nonzero constants, optionally times invertible generators.

    ``monomial_units`` models a Laurent ring inside the polynomial ring: the
    listed generators are treated as invertible.
    """

    kind: str = "constants_only"
    units: tuple = ()

    def __post_init__(self):
        if self.kind not in UNIT_KINDS:
            raise ValueError(f"unknown unit kind {self.kind!r}")
        if self.kind == "constants_only" and self.units:
            raise ValueError("constants_only takes no unit generators")
        if len(set(self.units)) != len(self.units) or any(i < 0 for i in self.units):
            raise ValueError("unit generator indices must be distinct and non-negative")

    @classmethod
    def constants(cls) -> UnitGroupSpec:
        return cls()

    @classmethod
    def laurent(cls, indices: Sequence[int]) -> UnitGroupSpec:
        return cls("monomial_units", tuple(sorted(indices)))

    def check(self, n: int) -> None:
        if any(i >= n for i in self.units):
            raise ValueError(f"unit generator index out of range for {n} generators")

    def normalize(self, g: Poly) -> Poly:
        """Associate-class representative: unit generators stripped, leading coefficient 1."""
        if self.units:
            content = [min(m[i] for m in g.terms) if i in self.units else 0 for i in range(g.nvars)]
            if any(content):
                g = Poly(g.nvars, {tuple(a - b for a, b in zip(m, content)): c for m, c in g.terms.items()})
        return g.monic()


def _sort_polys(polys) -> list[Poly]:
    return sorted(polys, key=lambda p: (p.total_degree(), [grlex_key(m) for m, _ in p.sorted_terms()], str(p)))


def subwords(f: Poly, units: UnitGroupSpec = UnitGroupSpec()) -> list[Poly]:
    """Divisors of ``f`` up to associates, from subset products of its factorization.

    With invertible generators every unit generator is returned as well, since
    ``f = x_i * (x_i^-1 * f)``.
    """
    if not f:
        raise ValueError("subwords of zero are undefined")
    units.check(f.nvars)
    try:
        fac: Factorization = factor_bounded(f)
    except RequiresOracle as exc:
        raise FactorizationUnavailable(f"cannot factor {f}: {exc}") from exc
    n = f.nvars
    out: dict[Poly, None] = {}
    ranges = [range(k + 1) for _, k in fac.factors]
    for exps in product(*ranges):
        g = Poly.one(n)
        for (h, _), e in zip(fac.factors, exps):
            if e:
                g = g * h ** e
        out.setdefault(units.normalize(g))
    for i in units.units:
        out.setdefault(Poly.var(n, i))
    return _sort_polys(out)


# -- bounded subalgebra spans --------------------------------------------------

class _Span:
    """Echelonized span of polynomials of degree at most ``cap``."""

    def __init__(self, n: int, cap: int):
        self.n = n
        self.cols = list(reversed(monomials_up_to(n, cap)))
        self.index = {m: k for k, m in enumerate(self.cols)}
        self.rows: list[list] = []
        self.members: list[Poly] = []

    def _vec(self, p: Poly) -> list:
        return [p.coefficient(m) for m in self.cols]

    def contains(self, p: Poly) -> bool:
        return all(m in self.index for m in p.terms) and \
            linalg.in_span(self.rows, self._vec(p), len(self.cols))

    def add(self, p: Poly) -> bool:
        if any(m not in self.index for m in p.terms) or self.contains(p):
            return False
        self.rows = linalg.echelon_basis(self.rows + [self._vec(p)], len(self.cols))
        self.members.append(p)
        return True

    def basis(self) -> list[Poly]:
        return [Poly(self.n, {m: c for m, c in zip(self.cols, row) if c}) for row in self.rows]


def generated_span(P: PoissonStructure, gens: Sequence[Poly], degree_cap: int) -> _Span:
    """Span of the Poisson subalgebra generated by ``gens``, kept to degree ``degree_cap``.

    Products and brackets whose degree exceeds the cap are dropped, so this
    is the truncation of the true subalgebra only when nothing of higher
    degree is needed to reach low-degree elements.
    """
    span = _Span(P.n, degree_cap)
    span.add(Poly.one(P.n))
    for g in gens:
        span.add(g)
    frontier = list(span.members)
    while frontier:
        new = []
        for a in frontier:
            for b in list(span.members):
                for c in (a * b, bracket(P, a, b)):
                    if c and c.total_degree() <= degree_cap and span.add(c):
                        new.append(c)
        frontier = new
    return span


@dataclass(frozen=True)
class DivisorResult:
    generators: list
    status: str
    iterations: int
    note: str = field(default="")


def divisor_subalgebra(P: PoissonStructure, seeds: Sequence[Poly], units: UnitGroupSpec = UnitGroupSpec(),
                       iteration_cap: int = 4, degree_cap: int = 4) -> DivisorResult:
    """Bounded computation of the divisor Poisson subalgebra of ``seeds``.

    The first round is generated by the subwords of ``seeds``; each later
    round adds the subwords of a spanning set of the previous one (within
    the degree cap).  Returns a minimal
    list of non-constant generators and ``"stable"`` when an iteration adds
    nothing, ``"capped"`` otherwise.  A capped answer is a lower
    approximation.
    """
    seeds = list(seeds)
    if not seeds or any(not f for f in seeds):
        raise ValueError("seeds must be a nonempty list of nonzero polynomials")
    units.check(P.n)
    gens: list[Poly] = []
    span = generated_span(P, [], degree_cap)

    def absorb(candidates) -> bool:
        nonlocal span
        grew = False
        for w in _sort_polys(candidates):
            if w.total_degree() <= degree_cap and not w.is_constant() and not span.contains(w):
                gens.append(w)
                span = generated_span(P, gens, degree_cap)
                grew = True
        return grew

    absorb({w for f in seeds for w in subwords(f, units)})
    for it in range(1, iteration_cap + 1):
        cands = {w for b in span.basis() if b for w in subwords(b, units)}
        if not absorb(cands):
            return DivisorResult(_sort_polys(gens), "stable", it)
    return DivisorResult(_sort_polys(gens), "capped", iteration_cap,
                         "iteration cap reached; generators are a lower approximation")


# -- transcendence degree and stratiform chains --------------------------------

@dataclass(frozen=True)
class TdegDescriptor:
    """``polynomial(n)``, ``laurent(n)`` or ``ore_tower(base, steps)``."""

    kind: str
    n: int = 0
    base: TdegDescriptor | None = None

    def __post_init__(self):
        if self.kind not in ("polynomial", "laurent", "ore_tower"):
            raise ValueError(f"unknown descriptor kind {self.kind!r}")
        if self.n < 0:
            raise ValueError("counts must be non-negative")
        if (self.kind == "ore_tower") != (self.base is not None):
            raise ValueError("only ore_tower descriptors carry a base")

    @classmethod
    def from_json(cls, doc) -> TdegDescriptor:
        if doc["kind"] == "ore_tower":
            return cls("ore_tower", int(doc["steps"]), cls.from_json(doc["base"]))
        return cls(doc["kind"], int(doc["n"]))


def tdeg_catalog(desc: TdegDescriptor) -> int:
    """Transcendence degree: ``n`` for polynomial and Laurent rings, base plus steps for towers."""
    if desc.kind == "ore_tower":
        return tdeg_catalog(desc.base) + desc.n
    return desc.n


STEP_KINDS = ("finite_over", "ore_transcendental")
_STEP_ALIASES = {"finite": "finite_over", "finite_over": "finite_over",
                 "ore": "ore_transcendental", "ore_transcendental": "ore_transcendental"}


@dataclass(frozen=True)
class StratiformChain:
    """A declared chain from ``k``; finite steps carry no witness and are taken on trust."""

    steps: tuple = ()
    note: str = field(default="finite steps are declared, not verified", compare=False)

    def __post_init__(self):
        bad = [s for s in self.steps if s not in STEP_KINDS]
        if bad:
            raise ValueError(f"unknown chain steps {bad}")

    @classmethod
    def parse(cls, steps: Sequence[str]) -> StratiformChain:
        try:
            return cls(tuple(_STEP_ALIASES[s] for s in steps))
        except KeyError as exc:
            raise ValueError(f"unknown chain step {exc.args[0]!r}") from None

    def __add__(self, other: StratiformChain) -> StratiformChain:
        return StratiformChain(self.steps + other.steps)

    def to_json(self) -> list[str]:
        return list(self.steps)


def stratiform_length(chain: StratiformChain) -> int:
    return sum(1 for s in chain.steps if s == "ore_transcendental")


def polynomial_chain(n: int) -> StratiformChain:
    """``k[x_1..x_n]`` as ``n`` Ore steps with zero data."""
    return StratiformChain(("ore_transcendental",) * n)


def ore_steps_chain(steps: int) -> StratiformChain:
    return StratiformChain(("ore_transcendental",) * steps)


def ore_tower_chain(tower) -> StratiformChain:
    """Chain of an :class:`OreTower` whose base has the zero bracket."""
    if any(p for p in tower.base.table.values()):
        raise ValueError("only towers over a polynomial base with zero bracket are supported")
    return polynomial_chain(tower.base.n) + ore_steps_chain(len(tower.steps))


def tower_descriptor(tower) -> TdegDescriptor:
    return TdegDescriptor("ore_tower", len(tower.steps), TdegDescriptor("polynomial", tower.base.n))


@dataclass(frozen=True)
class ExampleAlgebra:
    description: str
    structure: PoissonStructure
    ideal: tuple
    chain: StratiformChain


def truncated_skew_example(extended: bool = False) -> ExampleAlgebra:
    """``k[x, y]/(x^2, y^2)`` with ``{x, y} = xy``, optionally extended by ``t`` with ``alpha = x d/dx + y d/dy``.

    The quotient is finite dimensional, so its chain is a single finite step;
    the extension adds one Ore step.  Both the ideal and the derivation are
    checked on the polynomial cover.
    """
    from .catalog import skew_symmetric
    from .pore import extend

    P = skew_symmetric([[0, 1], [-1, 0]])
    x, y = Poly.gens(2)
    ideal = (x * x, y * y)
    if not is_poisson_ideal(P, list(ideal)):
        raise AssertionError("(x^2, y^2) should be a Poisson ideal")
    chain = StratiformChain(("finite_over",))
    if not extended:
        return ExampleAlgebra("k[x,y]/(x^2,y^2), {x,y} = xy", P, ideal, chain)
    alpha = PolyDerivation.euler(2)
    # alpha(x^2) = 2x^2 and alpha(y^2) = 2y^2, so the ideal is alpha-stable
    if not is_poisson_derivation(P, alpha) or any(alpha(g) != g.scale(2) for g in ideal):
        raise AssertionError("the Euler derivation should preserve the bracket and the ideal")
    Q = extend(P, alpha, PolyDerivation.zero(2), "t")
    return ExampleAlgebra("(k[x,y]/(x^2,y^2))[t; alpha]", Q,
                          tuple(g.insert_variable(2) for g in ideal), chain + ore_steps_chain(1))


__all__ = [
    "UnitGroupSpec", "subwords", "generated_span", "DivisorResult", "divisor_subalgebra",
    "TdegDescriptor", "tdeg_catalog", "StratiformChain", "stratiform_length", "polynomial_chain",
    "ore_steps_chain", "ore_tower_chain", "tower_descriptor", "ExampleAlgebra", "truncated_skew_example",
    "factor_bounded", "is_irreducible",
]
