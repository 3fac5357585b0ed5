"""Poisson-Ore extensions: construction, towers and recognition.

Orientation: the new generator ``t`` satisfies ``{a, t} = alpha(a) t + delta(a)``
and the table stores ``p_(i,t) = {x_i, t}`` in exactly that form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import AlphaNotPoisson, DeltaNotCompatible
from .multipoly import Poly
from .pbracket import PoissonStructure, verify_jacobi
from .pderiv import PolyDerivation, is_poisson_alpha_derivation, is_poisson_derivation


@dataclass(frozen=True)
class OreStep:
    label: str
    alpha: PolyDerivation
    delta: PolyDerivation

    def to_json(self, names: Sequence[str]) -> dict:
        return {"label": self.label,
                "alpha": [p.format(names) for p in self.alpha.images],
                "delta": [p.format(names) for p in self.delta.images]}

    @classmethod
    def from_json(cls, doc: dict, names: Sequence[str]) -> OreStep:
        from .parsing import parse_poly
        alpha = PolyDerivation([parse_poly(s, names) for s in doc.get("alpha") or ["0"] * len(names)])
        delta = PolyDerivation([parse_poly(s, names) for s in doc.get("delta") or ["0"] * len(names)])
        return cls(doc["label"], alpha, delta)


def certify_step(P: PoissonStructure, alpha: PolyDerivation, delta: PolyDerivation) -> tuple[PolyDerivation, PolyDerivation]:
    if not is_poisson_derivation(P, alpha):
        raise AlphaNotPoisson("alpha is not a Poisson derivation of the base")
    if not is_poisson_alpha_derivation(P, delta, alpha):
        raise DeltaNotCompatible("delta is not a Poisson alpha-derivation of the base")
    return alpha.with_flag("poisson"), delta.with_flag(("alpha_compatible", "certified"))


def extend(P: PoissonStructure, alpha: PolyDerivation, delta: PolyDerivation, label: str) -> PoissonStructure:
    """``P[t; alpha, delta]`` with the new generator named ``label``."""
    certify_step(P, alpha, delta)
    n = P.n
    table = {(i, j): p.insert_variable(n) for (i, j), p in P.table.items()}
    t = Poly.var(n + 1, n)
    for i in range(n):
        table[(i, n)] = alpha.images[i].insert_variable(n) * t + delta.images[i].insert_variable(n)
    ext = PoissonStructure(list(P.names) + [label], table)
    verdict = verify_jacobi(ext)
    if not verdict.ok:
        raise AssertionError(f"certified Ore extension failed Jacobi at {verdict.witness}")
    return verdict.structure


@dataclass(frozen=True)
class OreTower:
    base: PoissonStructure
    steps: tuple

    def __add__(self, step: OreStep) -> OreTower:
        return build_tower(self.base, list(self.steps) + [step])

    def to_json(self) -> dict:
        names = list(self.base.names)
        steps = []
        for s in self.steps:
            steps.append(s.to_json(names))
            names.append(s.label)
        return {"schema": 1, "base": self.base.to_json(), "steps": steps}


def build_tower(base: PoissonStructure, steps: Sequence[OreStep]) -> OreTower:
    """Validate each step against the ring built so far."""
    current = base
    for s in steps:
        current = extend(current, s.alpha, s.delta, s.label)
    return OreTower(base, tuple(steps))


def flatten(tower: OreTower) -> PoissonStructure:
    current = tower.base
    for s in tower.steps:
        current = extend(current, s.alpha, s.delta, s.label)
    if not tower.steps:
        return verify_jacobi(current).structure
    return current


@dataclass(frozen=True)
class OreVerdict:
    is_ore: bool
    base: PoissonStructure | None = None
    alpha: PolyDerivation | None = None
    delta: PolyDerivation | None = None
    witness: tuple[str, str] | None = None


def recognize(P: PoissonStructure, var: int) -> OreVerdict:
    """Present ``P`` as an Ore extension in generator ``var`` over the remaining generators."""
    n = P.n
    if not 0 <= var < n:
        raise IndexError(f"generator index {var} out of range")
    others = [i for i in range(n) if i != var]
    base_table = {}
    for a, i in enumerate(others):
        for b, j in enumerate(others):
            if a < b:
                p = P.entry(i, j)
                if p.degree_in(var) > 0:
                    return OreVerdict(False, witness=(P.names[i], P.names[j]))
                base_table[(a, b)] = p.drop_variable(var)
    alpha_imgs, delta_imgs = [], []
    for i in others:
        parts = P.entry(i, var).coefficients_in(var)
        if any(k > 1 for k in parts):
            return OreVerdict(False, witness=(P.names[i], P.names[var]))
        q = parts.get(1, Poly.zero(n)).drop_variable(var)
        r = parts.get(0, Poly.zero(n)).drop_variable(var)
        alpha_imgs.append(q)
        delta_imgs.append(r)
    base = PoissonStructure([P.names[i] for i in others], base_table)
    alpha = PolyDerivation(alpha_imgs)
    delta = PolyDerivation(delta_imgs)
    try:
        alpha, delta = certify_step(base, alpha, delta)
    except (AlphaNotPoisson, DeltaNotCompatible):
        return OreVerdict(False, witness=(P.names[var], P.names[var]))
    return OreVerdict(True, base, alpha, delta)
