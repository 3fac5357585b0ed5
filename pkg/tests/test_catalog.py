from __future__ import annotations

import random
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import lie_jacobi_numpy
from poisson_forge import catalog
from poisson_forge.errors import LieJacobiFails, NotAntisymmetric, ZeroParameter
from poisson_forge.exactfield import elem, sqrt_or_adjoin
from poisson_forge.multipoly import Poly
from poisson_forge.pbracket import (
    bracket,
    center_up_to_degree,
    commutator_ideal,
    is_poisson_ideal,
    verify_jacobi,
)
from poisson_forge.pderiv import PolyDerivation
from poisson_forge.pore import recognize


def test_weyl_one():
    W = catalog.weyl(1)
    assert list(W.names) == ["x", "y"]
    assert W.entry(0, 1) == Poly.one(2)
    assert W.jacobi == "verified"


def test_weyl_two_entries():
    W = catalog.weyl(2)
    assert W.n == 4
    assert sum(1 for p in W.table.values() if p) == 2
    with pytest.raises(ValueError):
        catalog.weyl(0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_weyl_recognized_with_kronecker_delta(n):
    v = recognize(catalog.weyl(n), 2 * n - 1)
    assert v.is_ore and v.alpha.is_zero()
    size = 2 * n - 1
    assert v.delta.images == tuple(Poly.one(size) if j == n - 1 else Poly.zero(size) for j in range(size))


def test_weyl_center_and_ideals():
    W = catalog.weyl(1)
    assert center_up_to_degree(W, 3) == [Poly.one(2)]
    i, _ = sqrt_or_adjoin(-1)
    # every irreducible polynomial of degree at most 2 fails to generate a Poisson ideal
    samples = [W.parse(s) for s in ("x", "y", "x + y - 3", "x^2 + 1", "x*y + 1", "x^2 + y", "x*y - y^2 + 2")]
    samples.append(W.parse("x") + Poly.const(2, i))
    for f in samples:
        assert not is_poisson_ideal(W, [f])


def test_skew_two():
    S = catalog.skew_symmetric([[0, 3], [-3, 0]])
    assert S.entry(0, 1) == S.parse("3*x*y")


def test_skew_zero_is_trivial():
    S = catalog.skew_symmetric([[0, 0, 0], [0, 0, 0], [0, 0, 0]])
    assert not any(S.table.values())


def test_skew_rejects_non_antisymmetric():
    with pytest.raises(NotAntisymmetric):
        catalog.skew_symmetric([[0, 1], [1, 0]])
    with pytest.raises(NotAntisymmetric):
        catalog.skew_symmetric([[1, 0], [0, 0]])


def test_skew_jacobi_random():
    rng = random.Random(13)
    for _ in range(100):
        n = rng.randint(2, 4)
        lam = [[0] * n for _ in range(n)]
        for i, j in combinations(range(n), 2):
            v = rng.randint(-5, 5)
            lam[i][j], lam[j][i] = v, -v
        assert verify_jacobi(catalog.skew_symmetric(lam)).status == "verified"


def test_skew_with_irrational_entries():
    s2, _ = sqrt_or_adjoin(2)
    lam = [[elem(0), s2, elem(1)], [-s2, elem(0), elem(-3)], [elem(-1), elem(3), elem(0)]]
    assert verify_jacobi(catalog.skew_symmetric(lam)).ok


def test_heisenberg():
    H = catalog.heisenberg()
    assert H.entry(0, 1) == H.parse("g")
    assert not H.entry(0, 2) and not H.entry(1, 2)
    ideal = commutator_ideal(H)
    assert H.parse("g") in ideal.generators
    assert not ideal.is_unit_ideal()


def test_abelian_constants_give_trivial_bracket():
    P = catalog.kostant_kirillov(catalog.LieStructureConstants(3, {}))
    assert not any(P.table.values())


def test_family5_table():
    beta = 4
    P = catalog.bianchi("family5", beta)
    assert P.entry(0, 2) == -P.parse("e + 4*f")
    assert P.entry(1, 2) == -P.parse("f")


def test_family4_centers():
    P = catalog.bianchi("family4", -1)
    assert P.parse("e*f") in center_up_to_degree(P, 2)
    Q = catalog.bianchi("family4", 2)
    assert center_up_to_degree(Q, 3) == [Poly.one(3)]


def test_family4_recognized():
    for a in (2, -1, elem(1) / elem(3)):
        v = recognize(catalog.bianchi("family4", a), 2)
        e, f = Poly.gens(2)
        assert v.is_ore and v.delta == PolyDerivation([-e, f.scale(-elem(a))])


def test_family4_with_irrational_parameter():
    s2, _ = sqrt_or_adjoin(2)
    P = catalog.bianchi("family4", s2)
    assert P.entry(1, 2) == P.parse("-sqrt(2)*f")


def test_sl2_center_casimir():
    P = catalog.sl2()
    center = center_up_to_degree(P, 2)
    assert len(center) == 2
    cas = center[1]
    assert all(not bracket(P, cas, x) for x in P.gens())


def test_zero_parameters():
    for fam in ("family4", "family5"):
        with pytest.raises(ZeroParameter):
            catalog.bianchi(fam, 0)


def test_lie_jacobi_failure():
    bad = catalog.LieStructureConstants(3, {(0, 1): [0, 0, 1], (1, 2): [1, 1, 0]}, ("a", "b", "c"))
    with pytest.raises(LieJacobiFails) as exc:
        catalog.kostant_kirillov(bad)
    assert exc.value.witness == ("a", "b", "c")


def _full_array(c: catalog.LieStructureConstants) -> np.ndarray:
    arr = np.zeros((c.n, c.n, c.n), dtype=object)
    for i in range(c.n):
        for j in range(c.n):
            arr[i, j] = [v.to_fraction() for v in c.bracket_vector(i, j)]
    return arr


@settings(max_examples=60)
@given(st.lists(st.integers(-1, 1), min_size=9, max_size=9))
def test_kostant_kirillov_jacobi_equivalence(vals):
    c = catalog.LieStructureConstants(3, {(0, 1): vals[0:3], (0, 2): vals[3:6], (1, 2): vals[6:9]})
    lie_ok = lie_jacobi_numpy(_full_array(c))
    poisson_ok = verify_jacobi(catalog.kostant_kirillov_unchecked(c)).ok
    assert lie_ok == poisson_ok
    if lie_ok:
        assert catalog.kostant_kirillov(c).jacobi == "verified"
    else:
        with pytest.raises(LieJacobiFails):
            catalog.kostant_kirillov(c)


def test_four_dimensional_constants():
    rng = random.Random(8)
    for _ in range(30):
        consts = {(i, j): [rng.choice([0, 0, 1, -1]) for _ in range(4)] for i, j in combinations(range(4), 2)}
        c = catalog.LieStructureConstants(4, consts)
        assert lie_jacobi_numpy(_full_array(c)) == verify_jacobi(catalog.kostant_kirillov_unchecked(c)).ok


def test_by_name():
    assert catalog.by_name("weyl", ["2"]) == catalog.weyl(2)
    assert catalog.by_name("skew", ["3"]) == catalog.skew_symmetric([[0, 3], [-3, 0]])
    assert catalog.by_name("family4", ["-1"]) == catalog.bianchi("family4", -1)
    with pytest.raises(ValueError):
        catalog.by_name("nonsense")
