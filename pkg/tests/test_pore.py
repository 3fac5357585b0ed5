from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poisson_forge import catalog
from poisson_forge.errors import AlphaNotPoisson, DeltaNotCompatible
from poisson_forge.multipoly import Poly
from poisson_forge.parsing import parse_poly
from poisson_forge.pbracket import PoissonStructure, verify_jacobi
from poisson_forge.pderiv import PolyDerivation, solve_poisson_derivations
from poisson_forge.pore import OreStep, OreTower, build_tower, extend, flatten, recognize


def test_weyl_from_line():
    line = catalog.trivial(["x"])
    W = extend(line, PolyDerivation.zero(1), PolyDerivation([Poly.one(1)]), "y")
    assert W == catalog.weyl(1)
    assert W.entry(0, 1) == Poly.one(2)
    assert W.jacobi == "verified"


def test_zero_extension_pads_table():
    H = catalog.heisenberg()
    E = extend(H, PolyDerivation.zero(3), PolyDerivation.zero(3), "s")
    assert E.n == 4
    for i in range(3):
        assert not E.entry(i, 3)
        for j in range(3):
            assert E.entry(i, j) == H.entry(i, j).insert_variable(3)


def test_solvable_family_orientation():
    e, f = Poly.gens(2)
    delta = PolyDerivation([-e, f.scale(-2)])
    P = extend(catalog.trivial(["e", "f"]), PolyDerivation.zero(2), delta, "g")
    assert P.entry(0, 2) == -P.parse("e")
    assert P.entry(1, 2) == P.parse("-2*f")
    # printed the other way round, {g, e} = e
    assert P.entry(2, 0) == P.parse("e")
    assert P == catalog.bianchi("family4", 2)


def test_extend_rejects_bad_inputs():
    W = catalog.weyl(1)
    with pytest.raises(AlphaNotPoisson):
        extend(W, PolyDerivation.euler(2), PolyDerivation.zero(2), "t")
    with pytest.raises(DeltaNotCompatible):
        extend(W, PolyDerivation.zero(2), PolyDerivation.euler(2), "t")


def test_weyl_tower_table():
    for n in (1, 2, 3):
        P = flatten(catalog.weyl_tower(n))
        assert P.n == 2 * n
        for i in range(2 * n):
            for j in range(2 * n):
                want = Poly.one(2 * n) if j == i + n else (-Poly.one(2 * n) if i == j + n else Poly.zero(2 * n))
                assert P.entry(i, j) == want


def test_skew_tower_table():
    lam = [[0, 1, -2], [-1, 0, 5], [2, -5, 0]]
    P = flatten(catalog.skew_symmetric_tower(lam))
    for i in range(3):
        for j in range(3):
            want = (Poly.var(3, i) * Poly.var(3, j)).scale(lam[i][j]) if i != j else Poly.zero(3)
            assert P.entry(i, j) == want


def test_empty_tower():
    H = catalog.heisenberg()
    assert flatten(OreTower(H, ())) == H
    assert build_tower(H, []).steps == ()


def test_recognize_weyl():
    v = recognize(catalog.weyl(1), 1)
    assert v.is_ore
    assert v.alpha.is_zero() and v.delta.images == (Poly.one(1),)
    assert "poisson" in v.alpha.flags


def test_recognize_skew_last():
    lam = [[0, 1, -2], [-1, 0, 5], [2, -5, 0]]
    v = recognize(catalog.skew_symmetric(lam), 2)
    assert v.is_ore and v.delta.is_zero()
    assert v.alpha.images == (Poly.var(2, 0).scale(lam[0][2]), Poly.var(2, 1).scale(lam[1][2]))


def test_recognize_rejects_quadratic_in_new_generator():
    P = PoissonStructure(["x", "t"], {(0, 1): parse_poly("t^2", ["x", "t"])})
    v = recognize(P, 1)
    assert not v.is_ore and v.witness == ("x", "t")


def test_recognize_rejects_base_depending_on_generator():
    names = ["x", "y", "t"]
    P = PoissonStructure(names, {(0, 1): parse_poly("t", names)})
    v = recognize(P, 2)
    assert not v.is_ore and v.witness == ("x", "y")


def test_recognize_family4():
    v = recognize(catalog.bianchi("family4", 3), 2)
    e, f = Poly.gens(2)
    assert v.is_ore and v.delta.images == (-e, f.scale(-3))


def _random_step(rng: random.Random, base: PoissonStructure, label: str) -> OreStep:
    # alpha = 0 and delta drawn from the Poisson derivations of the base
    basis = solve_poisson_derivations(base, 1)
    delta = PolyDerivation.zero(base.n)
    for d in basis:
        delta = delta + d.scale(rng.randint(-2, 2))
    return OreStep(label, PolyDerivation.zero(base.n), delta)


@settings(max_examples=20)
@given(st.integers(0, 10_000))
def test_round_trip_recovers_last_step(seed):
    rng = random.Random(seed)
    base = rng.choice([catalog.trivial(["a"]), catalog.weyl(1), catalog.skew_symmetric([[0, 2], [-2, 0]])])
    steps, current = [], base
    for k in range(rng.randint(1, 2)):
        s = _random_step(rng, current, f"t{k}")
        steps.append(s)
        current = extend(current, s.alpha, s.delta, s.label)
    P = flatten(build_tower(base, steps))
    assert verify_jacobi(P).status == "verified"
    v = recognize(P, P.n - 1)
    assert v.is_ore
    assert v.alpha == steps[-1].alpha and v.delta == steps[-1].delta


def test_flatten_associates_with_extend():
    tower = catalog.skew_symmetric_tower([[0, 1, -2], [-1, 0, 5], [2, -5, 0]])
    head = OreTower(tower.base, tower.steps[:-1])
    last = tower.steps[-1]
    assert flatten(head + last) == extend(flatten(head), last.alpha, last.delta, last.label)
    assert flatten(head + last) == flatten(tower)


def test_extend_is_jacobi_clean_across_catalog():
    rng = random.Random(5)
    for P in [catalog.weyl(1), catalog.heisenberg(), catalog.sl2(), catalog.bianchi("family5", 2)]:
        for _ in range(3):
            s = _random_step(rng, P, "s")
            assert verify_jacobi(extend(P, s.alpha, s.delta, "s")).status == "verified"


def test_tower_json():
    tower = catalog.weyl_tower(2)
    doc = json.loads(json.dumps(tower.to_json()))
    base = PoissonStructure.from_json(doc["base"])
    names = list(base.names)
    steps = []
    for sd in doc["steps"]:
        steps.append(OreStep.from_json(sd, names))
        names.append(sd["label"])
    assert build_tower(base, steps) == build_tower(tower.base, tower.steps)
