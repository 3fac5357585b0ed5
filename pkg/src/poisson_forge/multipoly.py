"""Sparse multivariate polynomials over quadratic towers.

A polynomial is a map from exponent tuples to nonzero :class:`FieldElem`
coefficients.  The monomial order is graded lexicographic everywhere, with
``x_1 > x_2 > ... > x_n``; printing lists terms in descending order.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from . import linalg
from .errors import ArityMismatch, NonInvertibleSubstitution, NotDivisible
from .exactfield import FieldElem, Scalar, elem, format_terms

Monomial = tuple  # tuple[int, ...]


def grlex_key(m: Monomial) -> tuple:
    return (sum(m), m)


def monomials_up_to(nvars: int, degree: int) -> list[Monomial]:
    """All monomials of total degree <= ``degree``, ascending in grlex."""
    out = []
    for d in range(degree + 1):
        out.extend(monomials_of_degree(nvars, d))
    return out


def monomials_of_degree(nvars: int, degree: int) -> list[Monomial]:
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(key=grlex_key)
    return out


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def _mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


class Poly:
    """An immutable sparse polynomial in ``nvars`` variables."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Monomial, Scalar] | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for m, c in terms.items():
                if len(m) != nvars:
                    raise ArityMismatch(f"monomial {m} has wrong length for {nvars} variables")
                c = elem(c)
                if not c.is_zero():
                    clean[tuple(m)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> Poly:
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> Poly:
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, nvars: int, c: Scalar) -> Poly:
        c = elem(c)
        return cls._raw(nvars, {} if c.is_zero() else {(0,) * nvars: c})

    @classmethod
    def one(cls, nvars: int) -> Poly:
        return cls.const(nvars, 1)

    @classmethod
    def var(cls, nvars: int, i: int) -> Poly:
        if not 0 <= i < nvars:
            raise ArityMismatch(f"generator index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): elem(1)})

    @classmethod
    def monomial(cls, m: Monomial, c: Scalar = 1) -> Poly:
        return cls(len(m), {tuple(m): c})

    @classmethod
    def gens(cls, nvars: int) -> list[Poly]:
        return [cls.var(nvars, i) for i in range(nvars)]

    # -- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self) -> FieldElem:
        return self.terms.get((0,) * self.nvars, elem(0))

    def coefficient(self, m: Monomial) -> FieldElem:
        return self.terms.get(tuple(m), elem(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((m[i] for m in self.terms), default=-1)

    def variables(self) -> list[int]:
        return [i for i in range(self.nvars) if any(m[i] for m in self.terms)]

    def sorted_terms(self) -> list[tuple[Monomial, FieldElem]]:
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading_monomial(self) -> Monomial:
        return max(self.terms, key=grlex_key)

    def leading_coefficient(self) -> FieldElem:
        return self.terms[self.leading_monomial()]

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = {sum(m) for m in self.terms}
        if degree is None:
            return len(degs) <= 1
        return degs <= {degree}

    def homogeneous_component(self, k: int) -> Poly:
        return Poly._raw(self.nvars, {m: c for m, c in self.terms.items() if sum(m) == k})

    def homogeneous_components(self) -> dict[int, Poly]:
        out: dict[int, dict] = {}
        for m, c in self.terms.items():
            out.setdefault(sum(m), {})[m] = c
        return {d: Poly._raw(self.nvars, t) for d, t in sorted(out.items())}

    def monic(self) -> Poly:
        if not self.terms:
            return self
        lc = self.leading_coefficient()
        if lc.is_one():
            return self
        return self.scale(lc.inverse())

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> Poly | None:
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ArityMismatch(f"{self.nvars} vs {other.nvars} variables")
            return other
        if isinstance(other, (int, Fraction, FieldElem)):
            return Poly.const(self.nvars, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            if m in terms:
                s = terms[m] + c
                if s.is_zero():
                    del terms[m]
                else:
                    terms[m] = s
            else:
                terms[m] = c
        return Poly._raw(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> Poly:
        c = elem(c)
        if c.is_zero():
            return Poly.zero(self.nvars)
        if c.is_one():
            return self
        return Poly._raw(self.nvars, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FieldElem)):
            return self.scale(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self.terms or not other.terms:
            return Poly.zero(self.nvars)
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                c = c1 * c2
                if m in terms:
                    terms[m] = terms[m] + c
                else:
                    terms[m] = c
        return Poly._raw(self.nvars, {m: c for m, c in terms.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __pow__(self, e: int) -> Poly:
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.one(self.nvars)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def mul_term(self, m: Monomial, c: FieldElem) -> Poly:
        if c.is_zero():
            return Poly.zero(self.nvars)
        return Poly._raw(self.nvars, {_mono_mul(m, k): v * c for k, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, FieldElem)):
            other = Poly.const(self.nvars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        if self.nvars != other.nvars or self.terms.keys() != other.terms.keys():
            return False
        return all(c == other.terms[m] for m, c in self.terms.items())

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset((m, hash(c)) for m, c in self.terms.items())))
        return self._hash

    # -- calculus and substitution ---------------------------------------

    def diff(self, i: int) -> Poly:
        if not 0 <= i < self.nvars:
            raise ArityMismatch(f"generator index {i} out of range")
        terms = {}
        for m, c in self.terms.items():
            k = m[i]
            if k:
                e = list(m)
                e[i] = k - 1
                terms[tuple(e)] = c * k
        return Poly._raw(self.nvars, terms)

    def compose(self, images: Sequence[Poly]) -> Poly:
        """Replace generator ``i`` by ``images[i]`` and expand."""
        if len(images) != self.nvars:
            raise ArityMismatch(f"need {self.nvars} images, got {len(images)}")
        target = images[0].nvars if images else 0
        if not self.terms:
            return Poly.zero(target)
        cache: list[dict[int, Poly]] = [{0: Poly.one(target), 1: img} for img in images]

        def power(i: int, k: int) -> Poly:
            table = cache[i]
            if k not in table:
                table[k] = power(i, k - 1) * images[i]
            return table[k]

        result = Poly.zero(target)
        for m, c in self.terms.items():
            term = Poly.const(target, c)
            for i, k in enumerate(m):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def evaluate(self, point: Sequence[Scalar]) -> FieldElem:
        total = elem(0)
        pt = [elem(v) for v in point]
        for m, c in self.terms.items():
            term = c
            for v, k in zip(pt, m):
                if k:
                    term = term * v ** k
            total = total + term
        return total

    def partial_evaluate(self, i: int, value: Scalar) -> Poly:
        """Set generator ``i`` to ``value``; the variable count is unchanged."""
        value = elem(value)
        terms: dict = {}
        for m, c in self.terms.items():
            e = list(m)
            k = e[i]
            e[i] = 0
            e = tuple(e)
            v = c * value ** k if k else c
            terms[e] = terms[e] + v if e in terms else v
        return Poly._raw(self.nvars, {m: c for m, c in terms.items() if not c.is_zero()})

    def drop_variable(self, i: int) -> Poly:
        """Reinterpret in ``nvars - 1`` variables; generator ``i`` must be absent."""
        if self.degree_in(i) > 0:
            raise ValueError(f"generator {i} occurs in the polynomial")
        return Poly._raw(self.nvars - 1, {m[:i] + m[i + 1:]: c for m, c in self.terms.items()})

    def insert_variable(self, i: int) -> Poly:
        """Embed into ``nvars + 1`` variables with a new generator at index ``i``."""
        return Poly._raw(self.nvars + 1, {m[:i] + (0,) + m[i:]: c for m, c in self.terms.items()})

    def coefficients_in(self, i: int) -> dict[int, Poly]:
        """Split by powers of generator ``i``: ``{k: coefficient of x_i**k}``."""
        out: dict[int, dict] = {}
        for m, c in self.terms.items():
            e = list(m)
            k = e[i]
            e[i] = 0
            out.setdefault(k, {})[tuple(e)] = c
        return {k: Poly._raw(self.nvars, t) for k, t in out.items()}

    # -- text ---------------------------------------------------------------

    def format(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        pieces: list[tuple[int, str]] = []
        for m, c in self.sorted_terms():
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(m) if k
            )
            cterms = format_terms(c)
            if len(cterms) == 1:
                sign, body = cterms[0]
                if not mono:
                    pieces.append((sign, body))
                elif body == "1":
                    pieces.append((sign, mono))
                else:
                    pieces.append((sign, f"{body}*{mono}"))
            else:
                ctext = str(c)
                pieces.append((1, f"({ctext})*{mono}" if mono else f"({ctext})"))
        text = ("-" if pieces[0][0] < 0 else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            text += (" - " if sign < 0 else " + ") + body
        return text

    def __str__(self) -> str:
        return self.format(default_names(self.nvars))

    def __repr__(self) -> str:
        return f"Poly({self})"


def default_names(n: int) -> list[str]:
    if n <= 3:
        return ["x", "y", "t"][:n] if n == 3 else ["x", "y"][:n]
    return [f"x{i + 1}" for i in range(n)]


def poly_arith(f: Poly, g: Poly, op: str) -> Poly:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


def partial_derivative(f: Poly, i: int) -> Poly:
    return f.diff(i)


def homogeneous_component(f: Poly, k: int) -> Poly:
    if k < 0:
        raise ValueError("degree must be non-negative")
    return f.homogeneous_component(k)


def divmod_single(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    """Multivariate division of ``f`` by one polynomial ``g`` (grlex)."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if f.nvars != g.nvars:
        raise ArityMismatch(f"{f.nvars} vs {g.nvars} variables")
    lm = g.leading_monomial()
    lc_inv = g.terms[lm].inverse()
    q: dict = {}
    r: dict = {}
    p = f
    while p.terms:
        m = p.leading_monomial()
        c = p.terms[m]
        if _mono_divides(lm, m):
            qm = _mono_div(m, lm)
            qc = c * lc_inv
            q[qm] = qc
            p = p - g.mul_term(qm, qc)
        else:
            r[m] = c
            p = Poly._raw(p.nvars, {k: v for k, v in p.terms.items() if k != m})
    return Poly._raw(f.nvars, q), Poly._raw(f.nvars, r)


def divide_exact(f: Poly, g: Poly) -> Poly:
    """``b`` with ``f == g * b``; raises :class:`NotDivisible` otherwise.

    A single polynomial is a Groebner basis of the principal ideal it
    generates, so the division remainder vanishes exactly when ``g | f``.
    """
    q, r = divmod_single(f, g)
    if r.terms:
        raise NotDivisible(f"{g} does not divide {f}")
    return q


def divides(g: Poly, f: Poly) -> bool:
    return not divmod_single(f, g)[1].terms


# --------------------------------------------------------------------------
# substitutions
# --------------------------------------------------------------------------

SUBSTITUTION_KINDS = ("linear_homogeneous", "affine_filtered", "graded", "polynomial")


class Substitution:
    """A change of variables: old generator ``i`` becomes ``images[i]``.

    Images are polynomials in the new generators.  ``kind`` records which
    family the substitution belongs to and is validated on construction.
    """

    __slots__ = ("images", "kind")

    def __init__(self, images: Sequence[Poly], kind: str = "affine_filtered"):
        if kind not in SUBSTITUTION_KINDS:
            raise ValueError(f"unknown substitution kind {kind!r}")
        self.images = tuple(images)
        self.kind = kind
        n = len(self.images)
        if any(img.nvars != n for img in self.images):
            raise ArityMismatch("substitution images must live in a ring of the same size")
        if kind in ("linear_homogeneous", "graded"):
            if not all(img.is_homogeneous(1) for img in self.images):
                raise NonInvertibleSubstitution(f"{kind} substitution needs homogeneous degree-1 images")
        elif kind == "affine_filtered":
            if any(img.total_degree() > 1 for img in self.images):
                raise NonInvertibleSubstitution("affine substitution has an image of degree > 1")
        det = self.jacobian_det()
        if not det.is_constant() or det.is_zero():
            raise NonInvertibleSubstitution("Jacobian determinant is not a nonzero constant")

    @property
    def nvars(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int, kind: str = "linear_homogeneous") -> Substitution:
        return cls(Poly.gens(n), kind)

    @classmethod
    def affine(cls, matrix: Sequence[Sequence[Scalar]], shift: Sequence[Scalar] | None = None,
               kind: str | None = None) -> Substitution:
        """``x_i -> sum_j matrix[i][j] x'_j + shift[i]``."""
        n = len(matrix)
        gens = Poly.gens(n)
        images = []
        for i in range(n):
            img = Poly.zero(n)
            for j in range(n):
                img = img + gens[j].scale(elem(matrix[i][j]))
            if shift is not None:
                img = img + elem(shift[i])
            images.append(img)
        if kind is None:
            kind = "affine_filtered" if shift is not None and any(elem(s) for s in shift) else "linear_homogeneous"
        return cls(images, kind)

    def apply(self, f: Poly) -> Poly:
        return f.compose(self.images)

    def then(self, other: Substitution) -> Substitution:
        """Apply ``self`` first and ``other`` to the resulting variables."""
        kinds = {self.kind, other.kind}
        if "polynomial" in kinds:
            kind = "polynomial"
        elif "affine_filtered" in kinds:
            kind = "affine_filtered"
        elif "graded" in kinds:
            kind = "graded"
        else:
            kind = "linear_homogeneous"
        return Substitution([other.apply(img) for img in self.images], kind)

    def jacobian(self) -> list[list[Poly]]:
        return [[img.diff(j) for j in range(self.nvars)] for img in self.images]

    def jacobian_det(self) -> Poly:
        return linalg.det(self.jacobian())

    def is_affine(self) -> bool:
        return all(img.total_degree() <= 1 for img in self.images)

    def linear_part(self) -> list[list[FieldElem]]:
        n = self.nvars
        rows = []
        for img in self.images:
            row = []
            for j in range(n):
                e = [0] * n
                e[j] = 1
                row.append(img.coefficient(tuple(e)))
            rows.append(row)
        return rows

    def constant_part(self) -> list[FieldElem]:
        return [img.constant_term() for img in self.images]

    def degree(self) -> int:
        return max(img.total_degree() for img in self.images)

    def inverse(self, degree_cap: int | None = None) -> Substitution:
        """The inverse substitution.

        Affine substitutions invert by matrix inversion.  Polynomial ones are
        inverted by solving ``u_j(images) == x_j`` for unknown coefficients of
        ``u_j`` up to ``degree_cap``, which is linear in those unknowns.
        """
        n = self.nvars
        if self.is_affine():
            inv = linalg.inverse(self.linear_part())
            if inv is None:
                raise NonInvertibleSubstitution("linear part is singular")
            shift = self.constant_part()
            back = [-sum((inv[i][j] * shift[j] for j in range(n)), elem(0)) for i in range(n)]
            kind = self.kind if self.kind != "polynomial" else "affine_filtered"
            return Substitution.affine(inv, back, kind=kind if any(back) else
                                       ("graded" if kind == "graded" else "linear_homogeneous"))
        d = self.degree()
        cap = degree_cap if degree_cap is not None else d ** max(n - 1, 1)
        monos = monomials_up_to(n, cap)
        composed = [Poly.monomial(m).compose(self.images) for m in monos]
        images = []
        for j in range(n):
            target = Poly.var(n, j)
            support = sorted({k for p in composed + [target] for k in p.terms}, key=grlex_key)
            a = [[p.coefficient(k) for p in composed] for k in support]
            b = [target.coefficient(k) for k in support]
            sol = linalg.solve(a, b)
            if sol is None:
                raise NonInvertibleSubstitution(f"no inverse of degree <= {cap}")
            images.append(Poly(n, {m: c for m, c in zip(monos, sol)}))
        inv = Substitution(images, "polynomial")
        if any(self.apply(inv.images[j]) != Poly.var(n, j) for j in range(n)):
            raise NonInvertibleSubstitution("computed inverse does not compose to the identity")
        return inv

    def __eq__(self, other) -> bool:
        return isinstance(other, Substitution) and self.images == other.images

    def format(self, old_names: Sequence[str], new_names: Sequence[str] | None = None) -> list[str]:
        new_names = new_names or [f"{v}'" for v in old_names]
        return [f"{o} -> {img.format(new_names)}" for o, img in zip(old_names, self.images)]

    def __repr__(self) -> str:
        return f"Substitution({self.format(default_names(self.nvars))}, kind={self.kind!r})"


def substitute(f: Poly, s: Substitution) -> Poly:
    return s.apply(f)


def random_poly(rng, nvars: int, degree: int, coeff_range: int = 3, density: float = 0.6) -> Poly:
    terms = {}
    for m in monomials_up_to(nvars, degree):
        if rng.random() < density:
            c = rng.randint(-coeff_range, coeff_range)
            if c:
                terms[m] = c
    return Poly(nvars, terms)


def polys_in_span(polys: Iterable[Poly]) -> tuple[list[Monomial], list[list[FieldElem]]]:
    """Coefficient matrix of ``polys`` over their joint support (descending grlex)."""
    polys = list(polys)
    support = sorted({m for p in polys for m in p.terms}, key=grlex_key, reverse=True)
    return support, [[p.coefficient(m) for m in support] for p in polys]
