from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadtors.arith import (
    QuadElem,
    QuadField,
    format_rat,
    is_rational_square,
    parse_quad,
    parse_rat,
    quad_arith,
    quad_sqrt,
    squarefree_kernel,
)
from quadtors.errors import FieldMismatch, InputError

from conftest import elements, fields, rationals

K3 = QuadField(-3)
w = QuadElem(Fraction(1, 2), Fraction(1, 2), K3)


def test_unit_pair_product():
    assert quad_arith("mul", w, w.conj()) == 1


def test_one_over_sqrt_m3():
    assert quad_arith("div", K3(1), K3.sqrt_d) == QuadElem(0, Fraction(-1, 3), K3)


def test_cube_matches_oracle(derived):
    z = QuadElem(2, 2, K3)
    assert str(z * z * z) == derived["cube_2_plus_2sqrtm3"] == "-64"


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        quad_arith("div", K3(1), K3(0))


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        quad_arith("add", K3(1), QuadField(5)(1))
    with pytest.raises(FieldMismatch):
        K3.sqrt_d + QuadField(5).sqrt_d


def test_rationals_cross_fields():
    assert K3(2) + QuadField(5).sqrt_d == QuadElem(2, 1, QuadField(5))


@pytest.mark.parametrize("r,root", [(Fraction(49, 4), Fraction(7, 2)), (2, None), (0, 0), (-4, None)])
def test_is_rational_square(r, root):
    assert is_rational_square(r) == root


@pytest.mark.parametrize("n,k", [(12, 3), (-18, -2), (-3, -3), (1, 1), (-1, -1), (50, 2)])
def test_squarefree_kernel(n, k):
    assert squarefree_kernel(n) == k


def test_squarefree_kernel_zero():
    with pytest.raises(InputError):
        squarefree_kernel(0)


def test_quad_sqrt_examples(derived):
    assert quad_sqrt(K3(-3)) in (K3.sqrt_d, -K3.sqrt_d)
    r = quad_sqrt(K3(-48))
    assert sorted([str(r), str(-r)]) == derived["sqrt_m48_in_Qsqrtm3"]
    assert quad_sqrt(QuadField(5)(2)) is None
    assert derived["2_is_square_in_Qsqrt5"] is False


def test_field_validation():
    for bad in (0, 1, 4, -12):
        with pytest.raises(InputError):
            QuadField(bad)
    with pytest.warns(UserWarning):
        assert QuadField.from_int(-12).d == -3
    with pytest.raises(InputError):
        QuadField.from_int(9)


def test_text_forms():
    K = QuadField(-3)
    assert str(QuadElem(Fraction(1, 2), Fraction(-1, 2), K)) == "1/2 - 1/2*sqrt(-3)"
    assert str(K.sqrt_d) == "sqrt(-3)"
    assert str(-K.sqrt_d) == "-sqrt(-3)"
    assert format_rat(Fraction(-4, 6)) == "-2/3"
    assert parse_rat("-2/9") == Fraction(-2, 9)
    assert parse_quad("2-2*sqrt(-3)", K) == QuadElem(2, -2, K)
    assert parse_quad("-4*sqrt(-3)", K) == QuadElem(0, -4, K)
    assert parse_quad("7/3", K) == Fraction(7, 3)
    for bad in ("", "x", "1/0", "2+sqrt(5)", "3sqrt(-3)"):
        with pytest.raises(InputError):
            parse_quad(bad, K)


@given(elements(), st.data())
def test_round_trip_text(z, data):
    assert parse_quad(str(z), z.field) == z


@given(fields.flatmap(lambda K: st.tuples(elements(K), elements(K, nonzero=True))))
def test_mul_then_div_is_identity(pair):
    w_, z = pair
    assert quad_arith("div", quad_arith("mul", w_, z), z) == w_


@given(elements())
def test_sqrt_of_square_exists(r):
    s = quad_sqrt(r * r)
    assert s is not None and s * s == r * r


@given(elements())
def test_sqrt_is_a_root_when_found(s):
    r = quad_sqrt(s)
    if r is not None:
        assert r * r == s


@given(elements(), elements())
def test_norm_is_multiplicative(a, b):
    b = QuadElem(b.u, b.v, a.field)
    assert (a * b).norm() == a.norm() * b.norm()


@given(rationals(10**6, 10**6))
def test_fraction_lowest_terms(r):
    assert r.denominator > 0
    from math import gcd

    assert gcd(r.numerator, r.denominator) == 1
