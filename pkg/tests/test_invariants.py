from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from poisson_forge import catalog
from poisson_forge.errors import FactorizationUnavailable
from poisson_forge.invariants import (
    StratiformChain,
    TdegDescriptor,
    UnitGroupSpec,
    divisor_subalgebra,
    generated_span,
    ore_tower_chain,
    polynomial_chain,
    stratiform_length,
    subwords,
    tdeg_catalog,
    tower_descriptor,
    truncated_skew_example,
)
from poisson_forge.multipoly import Poly, divide_exact
from poisson_forge.parsing import parse_poly
from poisson_forge.pbracket import bracket, verify_jacobi
from poisson_forge.pderiv import PolyDerivation, certify_lnd, pml_over_approximation

G2 = ["x", "y"]


def P2(s: str) -> Poly:
    return parse_poly(s, G2)


# -- subwords -------------------------------------------------------------------------

def test_subwords_of_square():
    assert subwords(P2("x^2")) == [P2("1"), P2("x"), P2("x^2")]


def test_subwords_of_one():
    assert subwords(P2("1")) == [P2("1")]


def test_subwords_of_one_with_invertible_generators():
    words = subwords(Poly.one(3), UnitGroupSpec.laurent([0, 1, 2]))
    assert set(Poly.gens(3)) <= set(words)


def test_subwords_strip_unit_generators():
    # x is invertible, so x^2 (y + 1) has the same divisors as y + 1, plus the unit x itself
    words = subwords(P2("x^2*y + x^2"), UnitGroupSpec.laurent([0]))
    assert set(words) == {P2("1"), P2("y + 1"), P2("x")}


def test_subwords_divide():
    for text in ("x^2*y - y", "3*x*y + 1", "x^4 - 4", "x^2*y^3 + x^2*y^2"):
        f = P2(text)
        for g in subwords(f):
            divide_exact(f, g)


def test_subwords_unavailable():
    with pytest.raises(FactorizationUnavailable):
        subwords(P2("x^3*y + y^3 + 1"))
    with pytest.raises(ValueError):
        subwords(Poly.zero(2))


def test_unit_spec_validation():
    with pytest.raises(ValueError):
        UnitGroupSpec("constants_only", (0,))
    with pytest.raises(ValueError):
        UnitGroupSpec("group")
    with pytest.raises(ValueError):
        subwords(P2("x"), UnitGroupSpec.laurent([5]))


# -- divisor subalgebras ---------------------------------------------------------------

def test_divisor_of_one_is_the_field():
    res = divisor_subalgebra(catalog.trivial(["a", "b"]), [Poly.one(2)])
    assert res.generators == [] and res.status == "stable"


def test_divisor_of_one_with_invertible_generators():
    P = catalog.skew_symmetric([[0, 1, -2], [-1, 0, 5], [2, -5, 0]])
    res = divisor_subalgebra(P, [Poly.one(3)], UnitGroupSpec.laurent([0, 1, 2]))
    assert set(res.generators) == set(Poly.gens(3))
    assert res.status == "stable"


def test_divisor_weyl_line():
    W = catalog.weyl(1)
    res = divisor_subalgebra(W, [W.parse("x")])
    assert res.generators == [W.parse("x")]
    assert res.status == "stable" and res.iterations == 1


def test_divisor_iteration_cap():
    W = catalog.weyl(1)
    res = divisor_subalgebra(W, [W.parse("x*y")], iteration_cap=1, degree_cap=2)
    assert res.status in ("stable", "capped")
    if res.status == "capped":
        assert "lower approximation" in res.note
    with pytest.raises(ValueError):
        divisor_subalgebra(W, [])


def _span_of(P, gens, cap):
    return generated_span(P, gens, cap)


@pytest.mark.parametrize("name", ["trivial", "weyl", "skew", "heisenberg"])
def test_divisor_monotone_and_idempotent(name):
    P = {"trivial": catalog.trivial(["x", "y"]), "weyl": catalog.weyl(1),
         "skew": catalog.skew_symmetric([[0, 2], [-2, 0]]), "heisenberg": catalog.heisenberg()}[name]
    small = [P.parse("x") if P.n == 2 else P.parse("g")]
    big = small + [P.parse("y^2 - 1") if P.n == 2 else P.parse("e*f")]
    r_small = divisor_subalgebra(P, small, degree_cap=3)
    r_big = divisor_subalgebra(P, big, degree_cap=3)
    span_big = _span_of(P, r_big.generators, 3)
    assert all(span_big.contains(g) for g in r_small.generators)
    if r_big.status == "stable" and r_big.generators:
        again = divisor_subalgebra(P, r_big.generators, degree_cap=3)
        assert again.generators == r_big.generators


def test_divisor_inside_lnd_kernels():
    T = catalog.trivial(["a", "b"])
    d = certify_lnd(PolyDerivation.partial(2, 1), 4)
    res = divisor_subalgebra(T, [T.parse("a^2 - 1")])
    assert res.generators
    assert all(not d(g) for g in res.generators)

    H = catalog.heisenberg()
    g = H.parse("g")
    lnds = pml_over_approximation(H, 1, 4, 2, central_element=g).derivations
    assert lnds
    res = divisor_subalgebra(H, [H.parse("g^2 - 1")], degree_cap=3)
    assert all(not d(w) for d in lnds for w in res.generators)


def test_generated_span_is_closed():
    W = catalog.weyl(1)
    span = generated_span(W, [W.parse("x")], 3)
    basis = span.basis()
    assert len(basis) == 4  # 1, x, x^2, x^3
    for a in basis:
        for b in basis:
            c = a * b
            if c.total_degree() <= 3:
                assert span.contains(c)
            assert span.contains(bracket(W, a, b))


# -- transcendence degree ---------------------------------------------------------------

def test_tdeg_examples():
    assert tdeg_catalog(TdegDescriptor("polynomial", 3)) == 3
    assert tdeg_catalog(TdegDescriptor("laurent", 4)) == 4
    weyl1 = TdegDescriptor("ore_tower", 1, TdegDescriptor("polynomial", 1))
    assert tdeg_catalog(weyl1) == 2
    nested = TdegDescriptor("ore_tower", 2, weyl1)
    assert tdeg_catalog(nested) == 4
    assert TdegDescriptor.from_json({"kind": "ore_tower", "steps": 2,
                                     "base": {"kind": "ore_tower", "steps": 1,
                                              "base": {"kind": "polynomial", "n": 1}}}) == nested
    with pytest.raises(ValueError):
        TdegDescriptor("ore_tower", 1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_weyl_tdeg_and_chain_agree(n):
    tower = catalog.weyl_tower(n)
    assert tdeg_catalog(tower_descriptor(tower)) == 2 * n
    chain = ore_tower_chain(tower)
    assert stratiform_length(chain) == 2 * n


def test_tower_chain_needs_zero_base():
    tower = catalog.skew_symmetric_tower([[0, 1, 1], [-1, 0, 1], [-1, -1, 0]])
    assert stratiform_length(ore_tower_chain(tower)) == 3
    from poisson_forge.pore import OreTower
    with pytest.raises(ValueError):
        ore_tower_chain(OreTower(catalog.weyl(1), ()))


# -- stratiform chains ---------------------------------------------------------------------

def test_truncated_example_lengths():
    base = truncated_skew_example()
    assert stratiform_length(base.chain) == 0
    ext = truncated_skew_example(extended=True)
    assert stratiform_length(ext.chain) == 1
    assert verify_jacobi(ext.structure).ok
    assert ext.structure.entry(0, 2) == ext.structure.parse("x*t")


def test_chain_parsing():
    c = StratiformChain.parse(["finite", "ore", "ore_transcendental", "finite_over"])
    assert c.to_json() == ["finite_over", "ore_transcendental", "ore_transcendental", "finite_over"]
    assert stratiform_length(c) == 2
    with pytest.raises(ValueError):
        StratiformChain.parse(["mystery"])
    assert stratiform_length(polynomial_chain(5)) == 5


@given(st.lists(st.sampled_from(["finite_over", "ore_transcendental"]), max_size=8),
       st.lists(st.sampled_from(["finite_over", "ore_transcendental"]), max_size=8))
def test_length_is_additive(a, b):
    ca, cb = StratiformChain(tuple(a)), StratiformChain(tuple(b))
    assert stratiform_length(ca + cb) == stratiform_length(ca) + stratiform_length(cb)
