"""Independent oracles: sympy for symbolic work, numpy for brute-force enumeration.

Nothing here calls the package's own bracket, linear algebra or Groebner code;
package values are only converted in and out.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import lcm

import numpy as np
import sympy as sp

from poisson_forge.exactfield import FieldElem
from poisson_forge.multipoly import Poly


def elem_to_sympy(e: FieldElem):
    """Embed a tower element into sympy by sending each adjoined root to a principal square root.

    Any choice of square roots is a field embedding, so identities checked
    through this map are identities in the tower.
    """
    roots = [sp.sqrt(elem_to_sympy(r)) for r in e.tower.radicands]
    total = sp.Integer(0)
    for k, c in enumerate(e.coords):
        if not c:
            continue
        term = sp.Rational(c.numerator, c.denominator)
        for i, root in enumerate(roots):
            if k >> i & 1:
                term *= root
        total += term
    return total


def poly_to_sympy(p: Poly, symbols):
    out = sp.Integer(0)
    for m, c in p.terms.items():
        mono = sp.Integer(1)
        for s, k in zip(symbols, m):
            mono *= s ** k
        out += elem_to_sympy(c) * mono
    return out


def rational_poly_from_sympy(expr, symbols) -> Poly:
    """Inverse conversion for polynomials with rational coefficients."""
    poly = sp.Poly(sp.expand(expr), *symbols)
    terms = {}
    for m, c in poly.terms():
        c = sp.Rational(c)
        terms[tuple(int(k) for k in m)] = Fraction(int(c.p), int(c.q))
    return Poly(len(symbols), terms)


def same(a, b) -> bool:
    """Exact sympy equality of two algebraic expressions."""
    d = sp.expand(a - b)
    if d == 0:
        return True
    return sp.simplify(sp.radsimp(d)) == 0


def numeric_close(a, b, digits: int = 60) -> bool:
    va, vb = complex(sp.N(a, digits)), complex(sp.N(b, digits))
    return abs(va - vb) <= 1e-30 * max(1.0, abs(va), abs(vb))


def sympy_bracket(table: dict, f, g, symbols):
    """``sum_{i<j} p_ij (df/dx_i dg/dx_j - df/dx_j dg/dx_i)`` straight from the definition."""
    out = sp.Integer(0)
    for (i, j), p in table.items():
        xi, xj = symbols[i], symbols[j]
        out += p * (sp.diff(f, xi) * sp.diff(g, xj) - sp.diff(f, xj) * sp.diff(g, xi))
    return sp.expand(out)


def structure_to_sympy(P, symbols) -> dict:
    return {k: poly_to_sympy(p, symbols) for k, p in P.table.items() if p}


# -- derivation oracle ---------------------------------------------------------

def derivation_ansatz(n: int, degree: int):
    """Unknown coefficient symbols for images of degree <= ``degree``, in a fixed order."""
    xs = sp.symbols(f"z0:{n}")
    monos = [m for d in range(degree + 1) for m in itertools.product(range(d + 1), repeat=n) if sum(m) == d]
    unknowns = [(i, m) for i in range(n) for m in monos]
    coeffs = sp.symbols(f"a0:{len(unknowns)}")
    images = [sp.Integer(0)] * n
    for (i, m), a in zip(unknowns, coeffs):
        mono = sp.Integer(1)
        for x, k in zip(xs, m):
            mono *= x ** k
        images[i] += a * mono
    return xs, unknowns, coeffs, images


def apply_derivation(images, xs, f):
    return sp.expand(sum(sp.diff(f, x) * img for x, img in zip(xs, images)))


def derivation_constraints(P, degree: int):
    """Integer matrix ``C`` with ``C a = 0`` iff the ansatz is a Poisson derivation."""
    n = P.n
    xs, unknowns, coeffs, images = derivation_ansatz(n, degree)
    table = structure_to_sympy(P, xs)
    eqs = []
    for i in range(n):
        for j in range(i + 1, n):
            pij = table.get((i, j), sp.Integer(0))
            lhs = apply_derivation(images, xs, pij)
            rhs = sympy_bracket(table, images[i], xs[j], xs) + sympy_bracket(table, xs[i], images[j], xs)
            diff = sp.expand(lhs - rhs)
            if diff != 0:
                eqs.extend(sp.Poly(diff, *xs).coeffs())
    if not eqs:
        return unknowns, np.zeros((0, len(coeffs)), dtype=np.int64)
    A, _ = sp.linear_eq_to_matrix(eqs, coeffs)
    rows = []
    for r in range(A.rows):
        row = [sp.Rational(v) for v in A.row(r)]
        scale = lcm(*[int(v.q) for v in row]) if row else 1
        rows.append([int(v * scale) for v in row])
    return unknowns, np.array(rows, dtype=np.int64)


def derivation_vector(d, unknowns) -> list[Fraction]:
    return [d.images[i].coefficient(m).to_fraction() for i, m in unknowns]


def annihilator(vectors: list[list[Fraction]], ncols: int) -> np.ndarray:
    """Integer rows spanning the vectors orthogonal to ``vectors`` (sympy nullspace)."""
    if not vectors:
        return np.eye(ncols, dtype=np.int64)
    M = sp.Matrix([[sp.Rational(v.numerator, v.denominator) for v in row] for row in vectors])
    rows = []
    for v in M.nullspace():
        scale = lcm(*[int(sp.Rational(c).q) for c in v])
        rows.append([int(c * scale) for c in v])
    return np.array(rows, dtype=np.int64).reshape(len(rows), ncols)


def grid(ncols: int, values=(-1, 0, 1)) -> np.ndarray:
    return np.array(list(itertools.product(values, repeat=ncols)), dtype=np.int64)


def brute_force_equivalent(C: np.ndarray, K: np.ndarray, points: np.ndarray) -> tuple[bool, int]:
    """Compare ``{v : C v = 0}`` with ``{v : K v = 0}`` on every grid point.

    ``K`` annihilates exactly the span of the solver's basis, so equality of
    the two masks means the solver and the enumeration accept the same
    coefficient vectors.  Returns the verdict and the number of solutions.
    """
    ok_c = np.all(points @ C.T == 0, axis=1) if C.size else np.ones(len(points), dtype=bool)
    ok_k = np.all(points @ K.T == 0, axis=1) if K.size else np.ones(len(points), dtype=bool)
    return bool(np.array_equal(ok_c, ok_k)), int(ok_c.sum())


# -- transport oracle ----------------------------------------------------------

def sympy_transport(P, subst, symbols) -> dict:
    """Table of ``P`` pulled back along ``subst``: ``J^-1 * Pi(subst) * J^-T``.

    ``J`` is the Jacobian of the substitution images in the new generators.
    """
    n = P.n
    images = [poly_to_sympy(p, symbols) for p in subst.images]
    table = structure_to_sympy(P, symbols)
    pi = sp.zeros(n, n)
    for (i, j), v in table.items():
        moved = v.subs(dict(zip(symbols, images)), simultaneous=True)
        pi[i, j], pi[j, i] = moved, -moved
    J = sp.Matrix([[sp.diff(img, x) for x in symbols] for img in images])
    Jinv = J.inv()
    out = (Jinv * pi * Jinv.T).applyfunc(sp.expand)
    return {(i, j): out[i, j] for i in range(n) for j in range(i + 1, n)}


# -- Lie algebra oracle --------------------------------------------------------

def lie_jacobi_numpy(c: np.ndarray) -> bool:
    """Jacobi identity for structure constants ``c[i, j, k]`` (full antisymmetric array)."""
    n = c.shape[0]
    for a, b, d in itertools.combinations(range(n), 3):
        total = np.zeros(n, dtype=object)
        for x, y, z in ((a, b, d), (b, d, a), (d, a, b)):
            inner = c[x, y]
            total = total + sum(inner[m] * c[m, z] for m in range(n))
        if any(v != 0 for v in total):
            return False
    return True
