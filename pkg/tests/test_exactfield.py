from __future__ import annotations

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import assume, given
from hypothesis import strategies as st

from oracles import elem_to_sympy, numeric_close, same
from poisson_forge.errors import NotAQuadraticTower
from poisson_forge.exactfield import (
    QQ,
    FieldElem,
    canonical_compare,
    canonical_sign_rep,
    common_tower,
    elem,
    field_arith,
    format_elem,
    is_square,
    sqrt_or_adjoin,
)
from poisson_forge.parsing import parse_scalar
from strategies import SQRT2, SQRT_M3, T2, T23, small_fractions, tower_elems


def test_rational_sum():
    assert field_arith(Fraction(1, 2), Fraction(1, 3), "add") == elem(Fraction(5, 6))


def test_sqrt2_squared():
    assert SQRT2 * SQRT2 == elem(2)
    assert T2.height == 1


def test_conjugate_product():
    one = elem(1)
    assert (one + SQRT2) * (one - SQRT2) == elem(-1)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        elem(1) / elem(0)


def test_sqrt_of_square_keeps_tower():
    root, tower = sqrt_or_adjoin(4)
    assert root == elem(2) and tower == QQ


def test_sqrt_of_minus_one():
    i, tower = sqrt_or_adjoin(-1)
    assert tower.height == 1 and i * i == elem(-1)
    assert format_elem(i) == "sqrt(-1)"


def test_sqrt_of_zero():
    root, tower = sqrt_or_adjoin(0)
    assert root.is_zero() and tower == QQ


def test_squarefree_core():
    root, tower = sqrt_or_adjoin(-4)
    assert root * root == elem(-4)
    assert format_elem(root) == "2*sqrt(-1)"
    assert tower.radicands == (elem(-1),)


def test_adjunction_is_idempotent():
    _, t1 = sqrt_or_adjoin(3)
    _, t2 = sqrt_or_adjoin(3)
    assert t1 == t2
    root, t3 = sqrt_or_adjoin(FieldElem.rational(3, t1))
    assert t3 == t1 and root * root == elem(3)


def test_adjoining_a_square_fails():
    with pytest.raises(NotAQuadraticTower):
        T2.adjoin(elem(8))


def test_compare_examples():
    assert canonical_compare(Fraction(1, 2), Fraction(1, 2)) == 0
    assert canonical_compare(0, 1) == -1
    # coordinate vectors (0, 1) against (3/2, 0); the root coordinate decides
    assert canonical_compare(SQRT2, Fraction(3, 2)) == 1


def test_nested_root_and_merge():
    # sqrt(1 + sqrt(2)) lives two levels up
    r, tower = sqrt_or_adjoin(elem(1) + SQRT2)
    assert tower.height == 2
    assert r * r == elem(1) + SQRT2
    # an element of the sibling tower Q(sqrt(3)) combines with it
    s3, _ = sqrt_or_adjoin(3)
    total = r + s3
    assert (total - s3) == r
    assert common_tower([r, s3]).height == 3


def test_merge_direction_is_symmetric():
    i, _ = sqrt_or_adjoin(-1)
    s2 = SQRT2
    assert (i + s2) == (s2 + i)
    assert (i * s2) == (s2 * i)
    assert (i * s2).tower == (s2 * i).tower


def test_parse_and_print_round_trip():
    for text in ["5/6", "-2", "sqrt(2)", "1 - 3/2*sqrt(-3)", "sqrt(2) + sqrt(3)"]:
        v = parse_scalar(text)
        assert parse_scalar(format_elem(v)) == v


@given(tower_elems(), tower_elems(), tower_elems())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a


@given(tower_elems())
def test_inverse(a):
    assume(not a.is_zero())
    assert a * a.inverse() == elem(1)


@given(tower_elems(), tower_elems())
def test_arithmetic_matches_sympy(a, b):
    sa, sb = elem_to_sympy(a), elem_to_sympy(b)
    assert same(elem_to_sympy(a * b), sa * sb)
    assert same(elem_to_sympy(a + b), sa + sb)
    if not b.is_zero():
        assert numeric_close(elem_to_sympy(a / b), sa / sb)


@given(small_fractions)
def test_sqrt_rational_squares_back(q):
    root, _ = sqrt_or_adjoin(q)
    assert root * root == elem(q)
    assert is_square(root * root)


@given(tower_elems(T2))
def test_sqrt_tower_element_squares_back(a):
    root, tower = sqrt_or_adjoin(a)
    assert root * root == a
    assert tower.height in (T2.height, T2.height + 1)


@given(tower_elems(), tower_elems(), tower_elems())
def test_compare_is_total_order(a, b, c):
    ab, ba = canonical_compare(a, b), canonical_compare(b, a)
    assert ab == -ba
    assert (ab == 0) == (a == b)
    if ab <= 0 and canonical_compare(b, c) <= 0:
        assert canonical_compare(a, c) <= 0


@given(tower_elems())
def test_sign_rep(a):
    r = canonical_sign_rep(a)
    assert r in (a, -a)
    assert canonical_sign_rep(-a) == r


def test_sympy_embedding_of_tower_generator():
    assert same(elem_to_sympy(SQRT_M3), sp.sqrt(-3))
    assert T23.height == 2
