"""Dense exact linear algebra over :class:`FieldElem`.

Matrices are lists of rows.  Everything here is plain Gaussian elimination;
the systems that come up (centers, derivation ansatz, kernels) have at most a
few hundred unknowns.
"""

from __future__ import annotations

from typing import Sequence

from .exactfield import FieldElem, elem

Matrix = list  # list[list[FieldElem]]

_ZERO = elem(0)
_ONE = elem(1)


def rref(rows: Sequence[Sequence[FieldElem]], ncols: int) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form.  Returns the nonzero rows and pivot columns."""
    m = [list(r) for r in rows if any(not x.is_zero() for x in r)]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        piv = None
        for i in range(rank, len(m)):
            if not m[i][col].is_zero():
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        prow = m[rank]
        inv = prow[col].inverse()
        if not prow[col].is_one():
            prow = [x * inv if not x.is_zero() else x for x in prow]
            m[rank] = prow
        nz = [j for j in range(col, ncols) if not prow[j].is_zero()]
        for i in range(len(m)):
            if i == rank:
                continue
            c = m[i][col]
            if c.is_zero():
                continue
            row = m[i]
            for j in nz:
                row[j] = row[j] - c * prow[j]
        pivots.append(col)
        rank += 1
        if rank == len(m):
            break
    return m[:rank], pivots


def rank(rows: Sequence[Sequence[FieldElem]], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence[FieldElem]], ncols: int) -> list[list[FieldElem]]:
    """Basis of ``{v : rows @ v == 0}``, returned in reduced echelon form."""
    red, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    free = [j for j in range(ncols) if j not in pivot_set]
    basis = []
    for f in free:
        v = [_ZERO] * ncols
        v[f] = _ONE
        for r, p in zip(red, pivots):
            if not r[f].is_zero():
                v[p] = -r[f]
        basis.append(v)
    return echelon_basis(basis, ncols)


def echelon_basis(vectors: Sequence[Sequence[FieldElem]], ncols: int) -> list[list[FieldElem]]:
    """Canonical basis of a span: reduced echelon rows, in pivot order."""
    red, _ = rref(vectors, ncols)
    return red


def in_span(vectors: Sequence[Sequence[FieldElem]], v: Sequence[FieldElem], ncols: int) -> bool:
    return rank(list(vectors) + [list(v)], ncols) == rank(vectors, ncols)


def solve(a: Sequence[Sequence[FieldElem]], b: Sequence[FieldElem]) -> list[FieldElem] | None:
    """One solution of ``a @ x == b`` or ``None`` when inconsistent."""
    ncols = len(a[0]) if a else 0
    aug = [list(r) + [bi] for r, bi in zip(a, b)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [_ZERO] * ncols
    for r, p in zip(red, pivots):
        x[p] = r[ncols]
    return x


def inverse(a: Sequence[Sequence[FieldElem]]) -> Matrix | None:
    n = len(a)
    aug = [list(r) + [_ONE if i == j else _ZERO for j in range(n)] for i, r in enumerate(a)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        return None
    return [row[n:] for row in red[:n]]


def det(a: Sequence[Sequence]) -> object:
    """Determinant by cofactor expansion; entries may be field elements or polynomials."""
    n = len(a)
    if n == 0:
        return _ONE
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in a[1:]]
        term = a[0][j] * det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def adjugate(a: Sequence[Sequence]) -> list[list]:
    n = len(a)
    if n == 1:
        one = a[0][0] * 0 + 1
        return [[one]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(a) if k != i]
            c = det(minor)
            adj[j][i] = c if (i + j) % 2 == 0 else -c
    return adj
