"""Normal forms of filtered quadratic brackets on k[x, y] and graded ones on k[x, y, t].

Every classification returns a certificate: a substitution that transports
the input bracket exactly onto the normal form.  Transport follows the
bivector rule of :func:`pbracket.transport`; in two variables it reads
``f' = f(s) / det J(s)``.

Normal forms, with ``{x, y} = f`` and ``t`` central in three variables::

    C1   0            0
    C2   1            t^2
    C3   x            x*t
    C4a  x^2          x^2
    C4b  x^2 + 1      x^2 + t^2
    C4c  (none)       x^2 + y*t
    C5a  lam*x*y      lam*x*y
    C5b  lam*x*y + 1  lam*x*y + t^2
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import DegreeTooHigh, NotHomogeneous
from .exactfield import QQ, FieldElem, QuadTower, canonical_sign_rep, common_tower, elem, sqrt_or_adjoin
from .groebner import GroebnerBasis
from .multipoly import Poly, Substitution
from .pbracket import (
    PoissonStructure,
    center_up_to_degree,
    commutator_ideal,
    fiber_structure,
    principal_poisson_primes,
    structure_2var,
    structure_3var,
    transport,
)

FAMILIES = ("C1", "C2", "C3", "C4a", "C4b", "C4c", "C5a", "C5b")
NAMES_2 = ("x", "y")
NAMES_3 = ("x", "y", "t")


@dataclass(frozen=True)
class NormalFormLabel:
    family: str
    lam: FieldElem | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if (self.lam is not None) != (self.family in ("C5a", "C5b")):
            raise ValueError("lambda is present exactly for C5a and C5b")
        if self.lam is not None and (self.lam.is_zero() or canonical_sign_rep(self.lam) != self.lam):
            raise ValueError("lambda must be nonzero and in canonical sign")

    def __str__(self) -> str:
        return self.family if self.lam is None else f"{self.family}(lambda={self.lam})"


def normal_form(label: NormalFormLabel, arity: int = 2) -> Poly:
    """The bracket polynomial ``{x, y}`` of a normal form."""
    if arity not in (2, 3):
        raise ValueError("arity must be 2 or 3")
    x, y = Poly.var(arity, 0), Poly.var(arity, 1)
    one = Poly.var(arity, 2) ** 2 if arity == 3 else Poly.one(2)
    fam = label.family
    if fam == "C1":
        return Poly.zero(arity)
    if fam == "C2":
        return one
    if fam == "C3":
        return x * Poly.var(3, 2) if arity == 3 else x
    if fam == "C4a":
        return x * x
    if fam == "C4b":
        return x * x + one
    if fam == "C4c":
        if arity != 3:
            raise ValueError("C4c exists only in three variables")
        return x * x + y * Poly.var(3, 2)
    xy = (x * y).scale(label.lam)
    return xy if fam == "C5a" else xy + one


@dataclass(frozen=True)
class ClassificationCertificate:
    label: NormalFormLabel
    subst: Substitution
    tower: QuadTower
    normal_form: Poly
    arity: int
    steps: tuple = field(default=(), compare=False)

    def replay(self, f: Poly) -> bool:
        """Transport ``f`` along the certificate and compare with the normal form."""
        P = structure_2var(f) if self.arity == 2 else structure_3var(f)
        out = transport(P, self.subst)
        return out.entry(0, 1) == self.normal_form and all(
            not p for k, p in out.table.items() if k != (0, 1))


# --------------------------------------------------------------------------
# the two-variable engine
# --------------------------------------------------------------------------

def _sub2(xi: Poly, yi: Poly, kind: str = "affine_filtered") -> Substitution:
    return Substitution([xi, yi], kind)


class _State:
    """Current bracket polynomial plus the accumulated substitution."""

    def __init__(self, f: Poly):
        self.f = f
        self.subst = Substitution.identity(2, "affine_filtered")
        self.steps: list[Substitution] = []

    def apply(self, s: Substitution) -> None:
        det = s.jacobian_det().constant_term()
        self.f = s.apply(self.f).scale(det.inverse())
        self.subst = self.subst.then(s)
        self.steps.append(s)


def _coef(f: Poly, m: tuple) -> FieldElem:
    return f.coefficient(m)


def normalize_f2(f2: Poly) -> tuple[str, Substitution, FieldElem | None]:
    """Bring a binary quadratic form to ``0``, ``x^2`` or ``lam*x*y`` by a linear change.

    Returns ``(form, subst, lam)`` with ``form`` in ``{"zero", "square",
    "product"}``; ``lam`` is the canonical-sign representative.
    """
    if f2.nvars != 2 or (f2 and not f2.is_homogeneous(2)):
        raise NotHomogeneous("expected a homogeneous quadratic in two variables")
    x, y = Poly.gens(2)
    if not f2:
        return "zero", Substitution.identity(2), None
    a, b, c = _coef(f2, (2, 0)), _coef(f2, (1, 1)), _coef(f2, (0, 2))
    disc = b * b - a * c * 4
    if disc.is_zero():
        if not a.is_zero():
            q = b / (a * 2)
            s = _sub2(x - y.scale(q * a), y.scale(a), "linear_homogeneous")
        else:
            s = _sub2(y.scale(-c), x, "linear_homogeneous")
        return "square", s, None
    if a.is_zero() and c.is_zero():
        s = Substitution.identity(2)
        lam = b
    elif a.is_zero():
        # new coordinates x' = b x + c y, y' = y
        s = _sub2((x - y.scale(c)).scale(b.inverse()), y, "linear_homogeneous")
        lam = b
    else:
        root, _ = sqrt_or_adjoin(disc)
        zp = (-b + root) / (a * 2)
        zm = (-b - root) / (a * 2)
        # new coordinates x' = x - zp y, y' = x - zm y
        yimg = (x - y).scale((zm - zp).inverse())
        s = _sub2(x + yimg.scale(zp), yimg, "linear_homogeneous")
        lam = root
    canon = canonical_sign_rep(lam)
    if canon != lam:
        s = s.then(_sub2(y, x, "linear_homogeneous"))
    return "product", s, canon


def _classify_affine(f: Poly, graded: bool) -> tuple[NormalFormLabel, _State]:
    """Case analysis on ``f = f2 + f1 + f0`` in ``k[x, y]``.

    With ``graded`` the analysis stops at ``x^2 + y`` (the fiber of C4c) and
    uses affine steps only.
    """
    if f.total_degree() > 2:
        raise DegreeTooHigh(f"degree {f.total_degree()} exceeds 2")
    x, y = Poly.gens(2)
    st = _State(f)
    if not f:
        return NormalFormLabel("C1"), st
    f2 = f.homogeneous_component(2)
    if not f2:
        a, b, c = _coef(f, (1, 0)), _coef(f, (0, 1)), f.constant_term()
        if a.is_zero() and b.is_zero():
            st.apply(_sub2(x.scale(c), y, "linear_homogeneous"))
            return NormalFormLabel("C2"), st
        if a.is_zero():
            st.apply(_sub2(y, x, "linear_homogeneous"))
            a, b, c = _coef(st.f, (1, 0)), _coef(st.f, (0, 1)), st.f.constant_term()
        st.apply(_sub2(x - y.scale(b) - c / a, y.scale(a)))
        return NormalFormLabel("C3"), st
    form, s, lam = normalize_f2(f2)
    st.apply(s)
    f = st.f
    a, b, c = _coef(f, (1, 0)), _coef(f, (0, 1)), f.constant_term()
    if form == "square":
        if b.is_zero():
            st.apply(_sub2(x - a / 2, y))
            c1 = st.f.constant_term()
            if c1.is_zero():
                return NormalFormLabel("C4a"), st
            r, _ = sqrt_or_adjoin(c1)
            st.apply(_sub2(x.scale(r), y.scale(r), "linear_homogeneous"))
            return NormalFormLabel("C4b"), st
        w = -a / 2
        st.apply(_sub2(x.scale(b) + w, y.scale(b)))
        k = st.f.constant_term()
        st.apply(_sub2(x, y - k))
        if graded:
            return NormalFormLabel("C4c"), st
        st.apply(_sub2(-y, x - y * y, "polynomial"))
        return NormalFormLabel("C3"), st
    st.apply(_sub2(x - b / lam, y - a / lam))
    c1 = st.f.constant_term()
    if c1.is_zero():
        return NormalFormLabel("C5a", lam), st
    st.apply(_sub2(x.scale(c1), y, "linear_homogeneous"))
    return NormalFormLabel("C5b", lam), st


def _subst_tower(s: Substitution, extra: Sequence[FieldElem] = ()) -> QuadTower:
    coeffs = [c for img in s.images for c in img.terms.values()] + [e for e in extra if e is not None]
    return common_tower(coeffs) if coeffs else QQ


def classify_2var(f: Poly) -> ClassificationCertificate:
    if f.nvars != 2:
        raise ValueError("expected a polynomial in k[x, y]")
    label, st = _classify_affine(f, graded=False)
    nf = normal_form(label, 2)
    if st.f != nf:
        raise AssertionError(f"classification ended at {st.f}, expected {nf}")
    return ClassificationCertificate(label, st.subst, _subst_tower(st.subst, [label.lam]), nf, 2,
                                     tuple(st.steps))


def _homogenize(s: Substitution) -> Substitution:
    """Affine substitution of ``k[x, y]`` to a graded one of ``k[x, y, t]`` fixing ``t``."""
    images = []
    for img in s.images:
        if img.total_degree() > 1:
            raise AssertionError("graded classification used a nonlinear step")
        lifted = Poly(3, {m + (1 - sum(m),): c for m, c in img.terms.items()})
        images.append(lifted)
    images.append(Poly.var(3, 2))
    return Substitution(images, "graded")


def classify_3var_graded(f: Poly) -> ClassificationCertificate:
    """Classify ``{x, y} = f`` on ``k[x, y, t]`` with ``t`` central and ``f`` in degree 2.

    The fiber at ``t = 1`` is classified by the affine engine, whose
    substitution is then homogenized (constants pick up a factor ``t``).
    """
    if f.nvars != 3:
        raise ValueError("expected a polynomial in k[x, y, t]")
    if f and not f.is_homogeneous(2):
        raise NotHomogeneous("the bracket must be homogeneous of degree 2")
    fiber = f.partial_evaluate(2, 1).drop_variable(2)
    label, st = _classify_affine(fiber, graded=True)
    s3 = _homogenize(st.subst)
    nf = normal_form(label, 3)
    cert = ClassificationCertificate(label, s3, _subst_tower(s3, [label.lam]), nf, 3,
                                     tuple(_homogenize(s) for s in st.steps))
    if not cert.replay(f):
        raise AssertionError("graded certificate failed to replay")
    return cert


# --------------------------------------------------------------------------
# invariants
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class InvariantFingerprint:
    center_basis_deg4: tuple
    commutator_ideal: GroebnerBasis
    principal_primes_deg2: tuple
    fiber: InvariantFingerprint | None = None

    def fields(self) -> dict:
        return {"center": self.center_basis_deg4, "commutator_ideal": self.commutator_ideal.generators,
                "principal_primes": self.principal_primes_deg2, "fiber": self.fiber}

    def to_json(self, names: Sequence[str]) -> dict:
        doc = {
            "center_deg4": [p.format(names) for p in self.center_basis_deg4],
            "commutator_ideal": self.commutator_ideal.format(names),
            "principal_primes_deg2": [p.format(names) for p in self.principal_primes_deg2],
        }
        if self.fiber is not None:
            doc["fiber_at_1"] = self.fiber.to_json(names[:2])
        return doc


def fingerprint(P: PoissonStructure, central: int | None = None) -> InvariantFingerprint:
    """Center up to degree 4, commutator ideal and principal primes of degree <= 2.

    With ``central`` (a central generator index) the fingerprint of the
    quotient by ``t - 1`` is attached; it separates ``x^2 + y*t`` from the
    other square cases.
    """
    fib = None
    if central is not None:
        fib = fingerprint(fiber_structure(P, central, 1))
    return InvariantFingerprint(tuple(center_up_to_degree(P, 4)), commutator_ideal(P),
                                tuple(principal_poisson_primes(P, 2)), fib)


def fingerprint_bracket(f: Poly) -> InvariantFingerprint:
    if f.nvars == 2:
        return fingerprint(structure_2var(f))
    return fingerprint(structure_3var(f), central=2)


def classify(f: Poly) -> ClassificationCertificate:
    return classify_2var(f) if f.nvars == 2 else classify_3var_graded(f)


@dataclass(frozen=True)
class IsomorphismVerdict:
    isomorphic: bool
    witness: Substitution | None = None
    separating: str | None = None


def isomorphic_quadratic(f: Poly, g: Poly, arity: int | None = None) -> IsomorphismVerdict:
    """Decide isomorphism of two classifiable brackets by their normal forms.

    A positive answer carries a substitution transporting ``f`` onto ``g``; a
    negative one names the first fingerprint field that differs between the
    normal forms (or ``"lambda"`` when only the parameter does).
    """
    arity = arity or f.nvars
    if f.nvars != arity or g.nvars != arity:
        raise ValueError("both brackets must live in the stated arity")
    cf, cg = classify(f), classify(g)
    if cf.label == cg.label:
        witness = cf.subst.then(cg.subst.inverse())
        return IsomorphismVerdict(True, witness)
    ff, fg = fingerprint_bracket(cf.normal_form), fingerprint_bracket(cg.normal_form)
    for name in ("commutator_ideal", "principal_primes", "center", "fiber"):
        if ff.fields()[name] != fg.fields()[name]:
            return IsomorphismVerdict(False, separating=name)
    return IsomorphismVerdict(False, separating="lambda")


def lambda_of(label: NormalFormLabel) -> FieldElem | None:
    return label.lam


__all__ = [
    "FAMILIES", "NormalFormLabel", "ClassificationCertificate", "InvariantFingerprint",
    "IsomorphismVerdict", "normal_form", "normalize_f2", "classify_2var", "classify_3var_graded",
    "classify", "fingerprint", "fingerprint_bracket", "isomorphic_quadratic", "elem",
]
