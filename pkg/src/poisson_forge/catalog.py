"""Named families of Poisson structures, built through Ore towers where possible."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

from .errors import LieJacobiFails, NotAntisymmetric, ZeroParameter
from .exactfield import FieldElem, Scalar, elem
from .multipoly import Poly
from .pbracket import PoissonStructure, verify_jacobi
from .pderiv import PolyDerivation
from .pore import OreStep, OreTower, build_tower, flatten


def _names(prefix: str, n: int) -> list[str]:
    return [f"{prefix}{i + 1}" for i in range(n)]


def trivial(names: Sequence[str]) -> PoissonStructure:
    return PoissonStructure(names, {}, "verified")


# -- Weyl ---------------------------------------------------------------------

def weyl_tower(n: int) -> OreTower:
    """``k[x_1..x_n][y_1; delta_1]...[y_n; delta_n]`` with ``delta_i(x_j) = [i == j]``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    xs, ys = (["x"], ["y"]) if n == 1 else (_names("x", n), _names("y", n))
    steps = []
    for i in range(n):
        size = n + i
        images = [Poly.one(size) if j == i else Poly.zero(size) for j in range(size)]
        steps.append(OreStep(ys[i], PolyDerivation.zero(size), PolyDerivation(images)))
    return OreTower(trivial(xs), tuple(steps))


def weyl(n: int) -> PoissonStructure:
    return flatten(build_tower(weyl_tower(n).base, weyl_tower(n).steps))


# -- skew-symmetric -----------------------------------------------------------

def _skew_names(n: int) -> list[str]:
    return ["x", "y"] if n == 2 else _names("x", n)


def _matrix(lam: Sequence[Sequence[Scalar]]) -> list[list[FieldElem]]:
    n = len(lam)
    m = [[elem(v) for v in row] for row in lam]
    if any(len(row) != n for row in m):
        raise NotAntisymmetric("matrix is not square")
    for i in range(n):
        for j in range(n):
            if m[i][j] != -m[j][i]:
                raise NotAntisymmetric(f"entries ({i}, {j}) and ({j}, {i}) are not opposite")
    return m


def skew_symmetric_tower(lam: Sequence[Sequence[Scalar]], names: Sequence[str] | None = None) -> OreTower:
    """``k[x_1][x_2; alpha_2]...[x_n; alpha_n]`` with ``alpha_i(x_j) = lam_ji x_j``."""
    m = _matrix(lam)
    n = len(m)
    names = list(names) if names else _skew_names(n)
    steps = []
    for i in range(1, n):
        alpha = PolyDerivation([Poly.var(i, j).scale(m[j][i]) for j in range(i)])
        steps.append(OreStep(names[i], alpha, PolyDerivation.zero(i)))
    return OreTower(trivial(names[:1]), tuple(steps))


def skew_symmetric(lam: Sequence[Sequence[Scalar]], names: Sequence[str] | None = None) -> PoissonStructure:
    """``{x_i, x_j} = lam_ij x_i x_j``."""
    tower = skew_symmetric_tower(lam, names)
    return flatten(build_tower(tower.base, tower.steps))


# -- Kostant-Kirillov ---------------------------------------------------------

@dataclass(frozen=True)
class LieStructureConstants:
    """``[x_i, x_j] = sum_k c[(i, j)][k] x_k`` for ``i < j``."""

    n: int
    c: Mapping
    names: tuple = ()

    def bracket_vector(self, i: int, j: int) -> list[FieldElem]:
        if i == j:
            return [elem(0)] * self.n
        if i < j:
            return [elem(v) for v in self.c.get((i, j), [0] * self.n)]
        return [-elem(v) for v in self.c.get((j, i), [0] * self.n)]

    def bracket(self, u: Sequence[FieldElem], v: Sequence[FieldElem]) -> list[FieldElem]:
        out = [elem(0)] * self.n
        for i in range(self.n):
            if not u[i]:
                continue
            for j in range(self.n):
                if not v[j] or i == j:
                    continue
                w = self.bracket_vector(i, j)
                out = [o + u[i] * v[j] * wk for o, wk in zip(out, w)]
        return out

    def jacobi_witness(self) -> tuple[int, int, int] | None:
        basis = [[elem(1) if k == i else elem(0) for k in range(self.n)] for i in range(self.n)]
        for i, j, k in combinations(range(self.n), 3):
            a, b, c = basis[i], basis[j], basis[k]
            total = [x + y + z for x, y, z in zip(self.bracket(self.bracket(a, b), c),
                                                   self.bracket(self.bracket(b, c), a),
                                                   self.bracket(self.bracket(c, a), b))]
            if any(total):
                return (i, j, k)
        return None

    def generator_names(self) -> list[str]:
        return list(self.names) if self.names else _names("x", self.n)


def kostant_kirillov_unchecked(c: LieStructureConstants) -> PoissonStructure:
    n = c.n
    gens = Poly.gens(n)
    table = {}
    for i, j in combinations(range(n), 2):
        vec = c.bracket_vector(i, j)
        table[(i, j)] = sum((g.scale(v) for g, v in zip(gens, vec) if v), Poly.zero(n))
    return PoissonStructure(c.generator_names(), table)


def kostant_kirillov(c: LieStructureConstants) -> PoissonStructure:
    """Linear bracket ``{x_i, x_j} = [x_i, x_j]``; the Lie Jacobi identity is checked first."""
    witness = c.jacobi_witness()
    if witness is not None:
        names = c.generator_names()
        raise LieJacobiFails(tuple(names[k] for k in witness))
    verdict = verify_jacobi(kostant_kirillov_unchecked(c))
    if not verdict.ok:
        raise AssertionError("Lie Jacobi holds but the induced bracket fails Jacobi")
    return verdict.structure


# -- three-dimensional Lie algebras -------------------------------------------

BIANCHI_FAMILIES = ("sl2", "heisenberg", "L_plus_center", "family4", "family5")


def family4_tower(alpha: Scalar) -> OreTower:
    """``k[e, f][g; delta]`` with trivial base bracket, ``delta(e) = -e``, ``delta(f) = -alpha f``."""
    a = elem(alpha)
    if a.is_zero():
        raise ZeroParameter("family4 needs a nonzero parameter")
    e, f = Poly.gens(2)
    delta = PolyDerivation([-e, f.scale(-a)])
    return OreTower(trivial(["e", "f"]), (OreStep("g", PolyDerivation.zero(2), delta),))


def family5_tower(beta: Scalar) -> OreTower:
    """``k[e, f][g; delta]`` with ``delta(e) = -(e + beta f)``, ``delta(f) = -f``."""
    b = elem(beta)
    if b.is_zero():
        raise ZeroParameter("family5 needs a nonzero parameter")
    e, f = Poly.gens(2)
    delta = PolyDerivation([-(e + f.scale(b)), -f])
    return OreTower(trivial(["e", "f"]), (OreStep("g", PolyDerivation.zero(2), delta),))


def bianchi_constants(family: str, param: Scalar | None = None) -> LieStructureConstants:
    """Structure constants in the stored orientation.

    For the two solvable families the constants are those of the opposite
    bracket (``[g, e] = e`` rather than ``[e, g] = e``), which is isomorphic
    and makes the Ore derivation read ``delta(e) = -e``.
    """
    if family == "sl2":
        # {e, f} = h, {e, h} = -2e, {f, h} = 2f
        return LieStructureConstants(3, {(0, 1): [0, 0, 1], (0, 2): [-2, 0, 0], (1, 2): [0, 2, 0]},
                                     ("e", "f", "h"))
    if family == "heisenberg":
        return LieStructureConstants(3, {(0, 1): [0, 0, 1]}, ("e", "f", "g"))
    if family == "L_plus_center":
        return LieStructureConstants(3, {(0, 1): [1, 0, 0]}, ("e", "f", "z"))
    if family == "family4":
        a = elem(1 if param is None else param)
        if a.is_zero():
            raise ZeroParameter("family4 needs a nonzero parameter")
        return LieStructureConstants(3, {(0, 2): [-1, 0, 0], (1, 2): [0, -a, 0]}, ("e", "f", "g"))
    if family == "family5":
        b = elem(1 if param is None else param)
        if b.is_zero():
            raise ZeroParameter("family5 needs a nonzero parameter")
        return LieStructureConstants(3, {(0, 2): [-1, -b, 0], (1, 2): [0, -1, 0]}, ("e", "f", "g"))
    raise ValueError(f"unknown family {family!r}; expected one of {', '.join(BIANCHI_FAMILIES)}")


def bianchi(family: str, param: Scalar | None = None) -> PoissonStructure:
    P = kostant_kirillov(bianchi_constants(family, param))
    if family in ("family4", "family5"):
        tower = family4_tower(param if param is not None else 1) if family == "family4" \
            else family5_tower(param if param is not None else 1)
        if flatten(tower) != P:
            raise AssertionError("Ore presentation and structure constants disagree")
    return P


def heisenberg() -> PoissonStructure:
    return bianchi("heisenberg")


def sl2() -> PoissonStructure:
    return bianchi("sl2")


def by_name(name: str, params: Sequence[str] = ()) -> PoissonStructure:
    """Catalog lookup used by the command line."""
    from .parsing import parse_scalar

    key = name.lower()
    if key == "weyl":
        return weyl(int(params[0]) if params else 1)
    if key.startswith("weyl") and key[4:].isdigit():
        return weyl(int(key[4:]))
    if key == "skew":
        # params: upper-triangular entries lam_12, lam_13, ..., row by row
        vals = [parse_scalar(p) for p in params] or [elem(1)]
        n = 2
        while n * (n - 1) // 2 < len(vals):
            n += 1
        if n * (n - 1) // 2 != len(vals):
            raise ValueError("skew needs n(n-1)/2 upper-triangular entries")
        lam = [[elem(0)] * n for _ in range(n)]
        it = iter(vals)
        for i, j in combinations(range(n), 2):
            v = next(it)
            lam[i][j], lam[j][i] = v, -v
        return skew_symmetric(lam)
    fam = {"sl2": "sl2", "heisenberg": "heisenberg", "l_plus_center": "L_plus_center",
           "family4": "family4", "family5": "family5"}.get(key)
    if fam is None:
        raise ValueError(f"unknown catalog entry {name!r}")
    return bianchi(fam, parse_scalar(params[0]) if params else None)
