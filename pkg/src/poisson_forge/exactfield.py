"""Exact arithmetic in towers of quadratic extensions of the rationals.

A tower ``Q = K_0 < K_1 < ... < K_k`` is fixed by radicands ``r_1, ..., r_k``
where ``r_i`` lies in ``K_{i-1}`` and is not a square there; ``K_i`` is
``K_{i-1}(s_i)`` with ``s_i**2 == r_i``.  An element of ``K_k`` is stored as
its ``2**k`` rational coordinates in the multiplicative basis
``prod(s_i for i in bits(idx))``, so coordinate ``idx`` belongs to the basis
monomial whose set bits name the adjoined roots.

Coordinates split recursively: the lower half is the ``K_{k-1}`` part and the
upper half the coefficient of ``s_k``.  All the arithmetic below works on that
split and on plain tuples of :class:`fractions.Fraction`.

The canonical (encoding) order scans coordinates from the highest index down;
it is a deterministic tie-breaker, not a magnitude order.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence, Union

from .errors import IncompatibleTowers, NotAQuadraticTower

Coords = tuple  # tuple[Fraction, ...] of length 2**k

_ZERO = Fraction(0)
_ONE = Fraction(1)


# --------------------------------------------------------------------------
# coordinate-level arithmetic
# --------------------------------------------------------------------------

def _add(a: Coords, b: Coords) -> Coords:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: Coords, b: Coords) -> Coords:
    return tuple(x - y for x, y in zip(a, b))


def _neg(a: Coords) -> Coords:
    return tuple(-x for x in a)


def _scale(a: Coords, q: Fraction) -> Coords:
    return tuple(x * q for x in a)


def _is_zero(a: Coords) -> bool:
    return not any(a)


def _mul(a: Coords, b: Coords, rads: Sequence[Coords]) -> Coords:
    n = len(a)
    if n == 1:
        return (a[0] * b[0],)
    h = n // 2
    sub = rads[:-1]
    u1, v1, u2, v2 = a[:h], a[h:], b[:h], b[h:]
    if _is_zero(v1) and _is_zero(v2):
        return _mul(u1, u2, sub) + (_ZERO,) * h
    vv = _mul(v1, v2, sub)
    uu = _add(_mul(u1, u2, sub), _mul(rads[-1], vv, sub))
    cross = _add(_mul(u1, v2, sub), _mul(v1, u2, sub))
    return uu + cross


def _inv(a: Coords, rads: Sequence[Coords]) -> Coords:
    n = len(a)
    if n == 1:
        return (_ONE / a[0],)
    h = n // 2
    sub = rads[:-1]
    u, v = a[:h], a[h:]
    if _is_zero(v):
        return _inv(u, sub) + (_ZERO,) * h
    norm = _sub(_mul(u, u, sub), _mul(rads[-1], _mul(v, v, sub), sub))
    ninv = _inv(norm, sub)
    return _mul(u, ninv, sub) + _mul(_neg(v), ninv, sub)


def _sqrt_fraction(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _sqrt(a: Coords, rads: Sequence[Coords]) -> Coords | None:
    """Some square root of ``a`` inside its own field, or ``None``."""
    n = len(a)
    if n == 1:
        r = _sqrt_fraction(a[0])
        return None if r is None else (r,)
    h = n // 2
    sub = rads[:-1]
    r = rads[-1]
    u, v = a[:h], a[h:]
    zero = (_ZERO,) * h
    if _is_zero(v):
        p = _sqrt(u, sub)
        if p is not None:
            return p + zero
        # u = q**2 * r  <=>  sqrt(u) = q * s
        q = _sqrt(_mul(u, _inv(r, sub), sub), sub)
        if q is not None:
            return zero + q
        return None
    norm = _sub(_mul(u, u, sub), _mul(r, _mul(v, v, sub), sub))
    m = _sqrt(norm, sub)
    if m is None:
        return None
    for cand in (_add(u, m), _sub(u, m)):
        p2 = _scale(cand, Fraction(1, 2))
        if _is_zero(p2):
            continue
        p = _sqrt(p2, sub)
        if p is not None:
            q = _mul(v, _inv(_scale(p, Fraction(2)), sub), sub)
            return p + q
    return None


def _lead_sign(a: Coords) -> int:
    for x in reversed(a):
        if x:
            return 1 if x > 0 else -1
    return 0


def _pad(a: Coords, size: int) -> Coords:
    if len(a) == size:
        return a
    return a + (_ZERO,) * (size - len(a))


def _evaluate(coords: Coords, images: Sequence[Coords], rads: Sequence[Coords]) -> Coords:
    """Map an element given in some tower basis through root images."""
    n = len(coords)
    if n == 1:
        size = 1 << len(rads)
        return _pad((coords[0],), size)
    h = n // 2
    level = h.bit_length()  # n == 2**level
    u = _evaluate(coords[:h], images, rads)
    v = _evaluate(coords[h:], images, rads)
    if _is_zero(v):
        return u
    return _add(u, _mul(v, images[level - 1], rads))


# --------------------------------------------------------------------------
# towers
# --------------------------------------------------------------------------

class QuadTower:
    """An immutable tower of quadratic extensions, identified by its radicands."""

    __slots__ = ("_rads", "_hash")

    def __init__(self, rads: Iterable[Coords] = ()):
        self._rads = tuple(tuple(r) for r in rads)
        self._hash = hash(self._rads)

    @property
    def height(self) -> int:
        return len(self._rads)

    @property
    def size(self) -> int:
        return 1 << len(self._rads)

    @property
    def radicands(self) -> tuple[FieldElem, ...]:
        return tuple(FieldElem(r, QuadTower(self._rads[:i])) for i, r in enumerate(self._rads))

    def prefix(self, k: int) -> QuadTower:
        return QuadTower(self._rads[:k])

    def is_prefix_of(self, other: QuadTower) -> bool:
        return other._rads[: len(self._rads)] == self._rads

    def adjoin(self, r: FieldElem) -> QuadTower:
        """Adjoin a square root of ``r``; fails if ``r`` is already a square."""
        coords = r.embed(self).coords
        if _is_zero(coords) or _sqrt(coords, self._rads) is not None:
            raise NotAQuadraticTower(f"{r} is a square in the current field")
        return QuadTower(self._rads + (coords,))

    def gen(self, i: int) -> FieldElem:
        """The adjoined root ``s_i`` (1-based) as an element of this tower."""
        coords = [_ZERO] * self.size
        coords[1 << (i - 1)] = _ONE
        return FieldElem(tuple(coords), self)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, QuadTower) and self._rads == other._rads

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"QuadTower([{', '.join(str(r) for r in self.radicands)}])"


QQ = QuadTower()


def _tower_key(t: QuadTower) -> tuple:
    return (t.height, t._rads)


def merge_towers(a: QuadTower, b: QuadTower) -> tuple[QuadTower, list[Coords]]:
    """Smallest tower found by adjoining ``b``'s radicands on top of ``a``.

    Returns the merged tower and the images of ``b``'s roots in it.
    """
    if b.is_prefix_of(a):
        return a, [a.gen(i + 1).coords for i in range(b.height)]
    if a.is_prefix_of(b):
        return b, [b.gen(i + 1).coords for i in range(b.height)]
    tower = a
    images: list[Coords] = []
    for r in b._rads:
        r_img = _evaluate(r, images, tower._rads)
        root = _sqrt(r_img, tower._rads)
        if root is None:
            if _is_zero(r_img):
                raise IncompatibleTowers("radicand maps to zero")
            tower = QuadTower(tower._rads + (r_img,))
            images = [_pad(im, tower.size) for im in images]
            root = tower.gen(tower.height).coords
        elif _lead_sign(root) < 0:
            root = _neg(root)
        images.append(root)
    return tower, images


# --------------------------------------------------------------------------
# elements
# --------------------------------------------------------------------------

Scalar = Union[int, Fraction, "FieldElem"]


class FieldElem:
    """An exact element of a quadratic tower."""

    __slots__ = ("coords", "tower")

    def __init__(self, coords: Coords, tower: QuadTower = QQ):
        self.coords = coords
        self.tower = tower

    # -- construction -----------------------------------------------------

    @classmethod
    def rational(cls, q, tower: QuadTower = QQ) -> FieldElem:
        return cls(_pad((Fraction(q),), tower.size), tower)

    @classmethod
    def coerce(cls, x: Scalar) -> FieldElem:
        if isinstance(x, FieldElem):
            return x
        if isinstance(x, (int, Fraction)):
            return cls((Fraction(x),), QQ)
        if isinstance(x, str):
            from .parsing import parse_scalar
            return parse_scalar(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to FieldElem")

    def embed(self, tower: QuadTower) -> FieldElem:
        if tower == self.tower:
            return self
        if self.tower.is_prefix_of(tower):
            return FieldElem(_pad(self.coords, tower.size), tower)
        merged, images = merge_towers(tower, self.tower)
        if merged != tower:
            raise IncompatibleTowers(f"{self} does not live in {tower!r}")
        return FieldElem(_evaluate(self.coords, images, tower._rads), tower)

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_one(self) -> bool:
        return self.coords[0] == 1 and not any(self.coords[1:])

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def lead_sign(self) -> int:
        """Sign of the first nonzero coordinate in canonical order."""
        return _lead_sign(self.coords)

    def __bool__(self) -> bool:
        return any(self.coords)

    # -- arithmetic -------------------------------------------------------

    def _other(self, other) -> tuple[Coords, Coords, QuadTower] | None:
        if isinstance(other, (int, Fraction)):
            return self.coords, _pad((Fraction(other),), self.tower.size), self.tower
        if not isinstance(other, FieldElem):
            return None
        t1, t2 = self.tower, other.tower
        if t1 is t2 or t1 == t2:
            return self.coords, other.coords, t1
        if t1.is_prefix_of(t2):
            return _pad(self.coords, t2.size), other.coords, t2
        if t2.is_prefix_of(t1):
            return self.coords, _pad(other.coords, t1.size), t1
        # merge from the canonically smaller tower so a+b and b+a agree
        if _tower_key(t1) <= _tower_key(t2):
            merged, images = merge_towers(t1, t2)
            return (_pad(self.coords, merged.size),
                    _evaluate(other.coords, images, merged._rads), merged)
        merged, images = merge_towers(t2, t1)
        return (_evaluate(self.coords, images, merged._rads),
                _pad(other.coords, merged.size), merged)

    def __add__(self, other):
        if type(other) is FieldElem and len(self.coords) == 1 and len(other.coords) == 1:
            return FieldElem((self.coords[0] + other.coords[0],), QQ)
        ops = self._other(other)
        if ops is None:
            return NotImplemented
        a, b, t = ops
        return FieldElem(_add(a, b), t)

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is FieldElem and len(self.coords) == 1 and len(other.coords) == 1:
            return FieldElem((self.coords[0] - other.coords[0],), QQ)
        ops = self._other(other)
        if ops is None:
            return NotImplemented
        a, b, t = ops
        return FieldElem(_sub(a, b), t)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self) -> FieldElem:
        return FieldElem(_neg(self.coords), self.tower)

    def __mul__(self, other):
        if type(other) is FieldElem and len(self.coords) == 1 and len(other.coords) == 1:
            return FieldElem((self.coords[0] * other.coords[0],), QQ)
        ops = self._other(other)
        if ops is None:
            return NotImplemented
        a, b, t = ops
        return FieldElem(_mul(a, b, t._rads), t)

    __rmul__ = __mul__

    def inverse(self) -> FieldElem:
        if self.is_zero():
            raise ZeroDivisionError("division by zero field element")
        return FieldElem(_inv(self.coords, self.tower._rads), self.tower)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero field element")
            return FieldElem(_scale(self.coords, 1 / Fraction(other)), self.tower)
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return FieldElem.coerce(other) * self.inverse()

    def __pow__(self, e: int) -> FieldElem:
        if e < 0:
            return self.inverse() ** (-e)
        result = FieldElem.rational(1, self.tower)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- comparison -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.coords[0] == other and not any(self.coords[1:])
        if not isinstance(other, FieldElem):
            return NotImplemented
        if len(self.coords) == 1 and len(other.coords) == 1:
            return self.coords[0] == other.coords[0]
        a, b, _ = self._other(other)
        return a == b

    def __hash__(self) -> int:
        # coordinate 0 is the normalized trace, independent of the tower
        return hash(self.coords[0])

    def __str__(self) -> str:
        return format_elem(self)

    def __repr__(self) -> str:
        return f"FieldElem({format_elem(self)!r})"


def elem(x: Scalar) -> FieldElem:
    return FieldElem.coerce(x)


def field_arith(a: Scalar, b: Scalar, op: str) -> FieldElem:
    a, b = elem(a), elem(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def common_tower(values: Iterable[FieldElem]) -> QuadTower:
    tower = QQ
    for v in values:
        if v.tower != tower and not v.tower.is_prefix_of(tower):
            if tower.is_prefix_of(v.tower):
                tower = v.tower
            elif _tower_key(tower) <= _tower_key(v.tower):
                tower, _ = merge_towers(tower, v.tower)
            else:
                tower, _ = merge_towers(v.tower, tower)
    return tower


def sqrt_or_adjoin(a: Scalar) -> tuple[FieldElem, QuadTower]:
    """Square root of ``a``, adjoining one radicand when ``a`` is not a square.

    The root is normalized so that its leading coordinate (canonical order)
    is positive.  ``sqrt(0)`` is ``0`` in the unchanged tower.
    """
    a = elem(a)
    if a.is_zero():
        return a, a.tower
    root = _sqrt(a.coords, a.tower._rads)
    if root is not None:
        if _lead_sign(root) < 0:
            root = _neg(root)
        return FieldElem(root, a.tower), a.tower
    if a.is_rational():
        # adjoin the squarefree integer part so sqrt(-4) reads as 2*sqrt(-1)
        core, scale = _squarefree(a.coords[0])
        tower = a.tower.adjoin(FieldElem.rational(core, a.tower))
        return FieldElem(_scale(tower.gen(tower.height).coords, scale), tower), tower
    tower = a.tower.adjoin(a)
    return tower.gen(tower.height), tower


def _squarefree(q: Fraction) -> tuple[int, Fraction]:
    """``(core, scale)`` with ``q == core * scale**2`` and ``core`` a squarefree integer.

    Trial division stops at 10**6, so huge inputs may keep a square factor in
    ``core``; the result is still a valid decomposition.
    """
    num = q.numerator * q.denominator
    sign = -1 if num < 0 else 1
    num = abs(num)
    core, out = 1, 1
    p = 2
    while p * p <= num and p <= 10 ** 6:
        while num % (p * p) == 0:
            num //= p * p
            out *= p
        if num % p == 0:
            num //= p
            core *= p
        p += 1
    core *= num
    return sign * core, Fraction(out, q.denominator)


def is_square(a: Scalar) -> bool:
    a = elem(a)
    return a.is_zero() or _sqrt(a.coords, a.tower._rads) is not None


def canonical_compare(a: Scalar, b: Scalar) -> int:
    """Total order on coordinate vectors, most significant coordinate last.

    Returns -1, 0 or 1.  Zero exactly when ``a == b``.
    """
    a, b = elem(a), elem(b)
    ca, cb, _ = a._other(b)
    for x, y in zip(reversed(ca), reversed(cb)):
        if x != y:
            return -1 if x < y else 1
    return 0


def canonical_sign_rep(a: FieldElem) -> FieldElem:
    """The canonical_compare-minimal member of ``{a, -a}``."""
    return a if canonical_compare(a, -a) <= 0 else -a


# --------------------------------------------------------------------------
# text form
# --------------------------------------------------------------------------

def _basis_name(idx: int, tower: QuadTower) -> str:
    rads = tower.radicands
    parts = [f"sqrt({format_elem(rads[i])})" for i in range(tower.height) if idx >> i & 1]
    return "*".join(parts)


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_terms(a: FieldElem) -> list[tuple[int, str]]:
    """Signed terms of ``a`` as ``(sign, text-without-sign)`` pairs."""
    out = []
    for idx, c in enumerate(a.coords):
        if not c:
            continue
        sign = 1 if c > 0 else -1
        mag = abs(c)
        if idx == 0:
            out.append((sign, _fmt_q(mag)))
        else:
            name = _basis_name(idx, a.tower)
            out.append((sign, name if mag == 1 else f"{_fmt_q(mag)}*{name}"))
    return out


def format_elem(a: FieldElem) -> str:
    terms = format_terms(a)
    if not terms:
        return "0"
    text = ("-" if terms[0][0] < 0 else "") + terms[0][1]
    for sign, body in terms[1:]:
        text += (" - " if sign < 0 else " + ") + body
    return text
