"""One handler per verb.  Each returns a JSON-ready document (without the schema field)."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from .. import catalog, classify, invariants, pbracket, pderiv, pore
from ..multipoly import Poly
from ..parsing import parse_poly
from ..pbracket import PoissonStructure


class UsageError(Exception):
    """Bad invocation: exit code 1."""


# -- structure resolution -------------------------------------------------------

def split_gens(text: str | None, default: Sequence[str]) -> list[str]:
    if not text:
        return list(default)
    names = [g.strip() for g in text.split(",") if g.strip()]
    if not names:
        raise UsageError("--gens needs at least one generator name")
    return names


def structure_from_args(args) -> PoissonStructure:
    """``--structure FILE``, ``--catalog NAME`` or ``--bracket EXPR`` (t central when three gens)."""
    sources = [s for s in (args.structure, args.catalog, args.bracket) if s]
    if len(sources) != 1:
        raise UsageError("give exactly one of --structure, --catalog, --bracket")
    if args.structure:
        try:
            with open(args.structure, encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read {args.structure}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"{args.structure} is not valid JSON: {exc.msg}") from None
        try:
            return PoissonStructure.from_json(doc)
        except (KeyError, TypeError, AttributeError) as exc:
            raise UsageError(f"{args.structure} is not a structure document ({exc!r})") from None
    if args.catalog:
        try:
            return catalog.by_name(args.catalog, args.param or ())
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    brackets = args.bracket
    if len(brackets) != 1:
        raise UsageError("this verb takes a single --bracket")
    names = split_gens(args.gens, ("x", "y"))
    if len(names) not in (2, 3):
        raise UsageError("--bracket builds {x, y} = EXPR on two or three generators")
    f = parse_poly(brackets[0], names)
    return PoissonStructure(names, {(0, 1): f}, "verified")


def _fmt(P: PoissonStructure, polys) -> list[str]:
    return [P.format(p) for p in polys]


# -- verbs ------------------------------------------------------------------------

def cmd_bracket(args) -> dict:
    P = structure_from_args(args)
    f, g = P.parse(args.left), P.parse(args.right)
    return {"structure": P.to_json(), "left": P.format(f), "right": P.format(g),
            "bracket": P.format(pbracket.bracket(P, f, g))}


def cmd_jacobi(args) -> dict:
    P = structure_from_args(args)
    v = pbracket.verify_jacobi(P)
    return {"status": v.status, "witness": list(v.witness) if v.witness else None,
            "jacobiator": P.format(v.value) if v.value is not None else None}


def cmd_center(args) -> dict:
    P = structure_from_args(args)
    return {"degree": args.deg, "basis": _fmt(P, pbracket.center_up_to_degree(P, args.deg))}


def cmd_ideal(args) -> dict:
    P = structure_from_args(args)
    if not args.polys:
        gb = pbracket.commutator_ideal(P)
        return {"ideal": "commutator", "groebner": gb.format(P.names), "proper": not gb.is_unit_ideal()}
    gens = [P.parse(s) for s in args.polys]
    ok = pbracket.is_poisson_ideal(P, gens)
    doc = {"generators": _fmt(P, gens), "poisson_ideal": ok}
    if ok:
        Q = pbracket.quotient_bracket(P, gens)
        doc["groebner"] = Q.ideal.format(P.names)
        doc["quotient_table"] = [[P.names[i], P.names[j], P.format(p)]
                                 for (i, j), p in sorted(Q.table().items()) if p]
    return doc


def cmd_primes(args) -> dict:
    P = structure_from_args(args)
    return {"degree": args.deg, "principal_primes": _fmt(P, pbracket.principal_poisson_primes(P, args.deg))}


def classify_doc(expr: str, names: Sequence[str]) -> dict:
    f = parse_poly(expr, names)
    cert = classify.classify(f)
    fp = classify.fingerprint_bracket(cert.normal_form)
    return {
        "input": f.format(names),
        "label": cert.label.family,
        "lambda": str(cert.label.lam) if cert.label.lam is not None else None,
        "normal_form": cert.normal_form.format(names),
        "certificate": cert.subst.format(names),
        "radicands": [str(r) for r in cert.tower.radicands],
        "replay": cert.replay(f),
        "fingerprint": fp.to_json(names),
    }


def _batch(fn, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(*it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, *zip(*items)))


def _classify(args, arity: int) -> dict:
    if not args.bracket:
        raise UsageError("give at least one --bracket")
    names = split_gens(args.gens, ("x", "y", "t")[:arity])
    if len(names) != arity:
        raise UsageError(f"expected {arity} generator names")
    results = _batch(classify_doc, [(e, names) for e in args.bracket], args.jobs)
    return results[0] if len(results) == 1 else {"results": results}


def cmd_classify2(args) -> dict:
    return _classify(args, 2)


def cmd_classify3(args) -> dict:
    return _classify(args, 3)


def cmd_fingerprint(args) -> dict:
    P = structure_from_args(args)
    central = P.index(args.central) if args.central else None
    if central is None and args.bracket and P.n == 3:
        central = 2
    return classify.fingerprint(P, central).to_json(P.names)


def cmd_ore(args) -> dict:
    if args.action == "recognize":
        P = structure_from_args(args)
        if not args.var:
            raise UsageError("ore recognize needs --var")
        v = pore.recognize(P, P.index(args.var))
        if not v.is_ore:
            return {"is_ore": False, "witness": list(v.witness)}
        return {"is_ore": True, "base": v.base.to_json(),
                "alpha": v.alpha.format(v.base.names), "delta": v.delta.format(v.base.names)}
    if not args.tower:
        raise UsageError("ore build needs --tower FILE")
    try:
        with open(args.tower, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot load {args.tower}: {exc}") from None
    try:
        base = PoissonStructure.from_json(doc["base"])
        names = list(base.names)
        steps = []
        for sdoc in doc.get("steps", []):
            steps.append(pore.OreStep.from_json(sdoc, names))
            names.append(sdoc["label"])
    except (KeyError, TypeError, AttributeError) as exc:
        raise UsageError(f"{args.tower} is not a tower document ({exc!r})") from None
    tower = pore.build_tower(base, steps)
    return {"structure": pore.flatten(tower).to_json(), "tower": tower.to_json()}


def cmd_catalog(args) -> dict:
    try:
        P = catalog.by_name(args.name, args.params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return P.to_json()


def cmd_derivations(args) -> dict:
    P = structure_from_args(args)
    basis = pderiv.solve_poisson_derivations(P, args.deg)
    return {"degree": args.deg, "dimension": len(basis), "basis": [d.format(P.names) for d in basis]}


def cmd_pml(args) -> dict:
    P = structure_from_args(args)
    central = P.parse(args.central) if args.central else None
    r = pderiv.pml_over_approximation(P, args.deg, args.nilpotence, args.kernel_deg, central)
    return {
        "basis": _fmt(P, r.basis),
        "lnd": [d.format(P.names) for d in r.derivations],
        "rigid_within_bounds": r.rigid_within_bounds,
        "caps": {"derivation_degree": r.derivation_degree_cap, "nilpotence": r.nilpotence_bound,
                 "kernel_degree": r.kernel_degree_cap},
        "note": r.note,
    }


def cmd_divisor(args) -> dict:
    P = structure_from_args(args)
    F = [P.parse(s) for s in args.polys] or [Poly.one(P.n)]
    if args.units:
        units = invariants.UnitGroupSpec.laurent([P.index(u) for u in split_gens(args.units, ())])
    else:
        units = invariants.UnitGroupSpec()
    r = invariants.divisor_subalgebra(P, F, units, args.iterations, args.deg)
    return {"F": _fmt(P, F), "units": [P.names[i] for i in units.units], "generators": _fmt(P, r.generators),
            "status": r.status, "iterations": r.iterations, "note": r.note or None}


def cmd_stratiform(args) -> dict:
    try:
        steps = json.loads(args.chain)
    except json.JSONDecodeError as exc:
        raise UsageError(f"chain must be a JSON list: {exc.msg}") from None
    if not isinstance(steps, list) or not all(isinstance(s, str) for s in steps):
        raise UsageError("chain must be a JSON list of step names")
    try:
        chain = invariants.StratiformChain.parse(steps)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return {"chain": chain.to_json(), "length": invariants.stratiform_length(chain), "note": chain.note}


def cmd_discriminant(args) -> dict:
    P = structure_from_args(args)
    var = args.var or P.names[-1]
    d = pbracket.trivial_fiber_discriminant(P, P.index(var))
    return {"central": var, "discriminant": P.format(d)}


HANDLERS = {
    "bracket": cmd_bracket, "jacobi": cmd_jacobi, "center": cmd_center, "ideal": cmd_ideal,
    "primes": cmd_primes, "classify2": cmd_classify2, "classify3": cmd_classify3,
    "fingerprint": cmd_fingerprint, "ore": cmd_ore, "catalog": cmd_catalog,
    "derivations": cmd_derivations, "pml": cmd_pml, "divisor": cmd_divisor,
    "stratiform": cmd_stratiform, "discriminant": cmd_discriminant,
}
