import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadtors.arith import QuadElem, QuadField
from quadtors.curve import (
    INFINITY,
    Curve,
    Point,
    WIso,
    add_points,
    apply_iso,
    negate,
    point_order,
    scalar_mul,
    short_model,
    tate_normal_form,
    validate,
)
from quadtors.errors import InputError, OrderTooSmall, PointNotOnCurve, SingularCurve
from quadtors.torsion import torsion_subgroup

from conftest import FIELD_SEEDS, rationals

E1 = Curve.short(0, 1)
P23 = Point(Fraction(2), Fraction(3))


def test_validate(derived):
    validate(Curve.short(0, 1))
    with pytest.raises(SingularCurve):
        validate(Curve.short(0, 0))
    assert derived["disc_short_m3_2"] == 0
    with pytest.raises(SingularCurve):
        validate(Curve.short(-3, 2))
    assert Curve.short(0, 1).discriminant == -432


def test_add_examples(derived):
    assert add_points(E1, P23, INFINITY) == P23
    m1 = Point(Fraction(-1), Fraction(0))
    assert add_points(E1, m1, m1) == INFINITY
    assert str(add_points(E1, P23, P23)) == derived["double_2_3_on_x3p1"] == "(0, 1)"
    with pytest.raises(PointNotOnCurve):
        add_points(E1, Point(Fraction(1), Fraction(1)), P23)


def test_scalar_mul_and_order(derived):
    assert scalar_mul(E1, 0, P23) == INFINITY
    assert scalar_mul(E1, 3, Point(0, 1)) == INFINITY
    assert scalar_mul(E1, 6, P23) == INFINITY
    assert scalar_mul(E1, -1, P23) == Point(2, -3)
    assert point_order(E1, INFINITY) == 1
    assert point_order(E1, P23) == derived["order_2_3_on_x3p1"] == 6
    assert point_order(E1, Point(0, 1)) == derived["order_0_1_on_x3p1"] == 3
    assert point_order(Curve.short(0, 16), Point(0, 4)) == 3
    assert point_order(Curve.short(0, -2), Point(3, 5)) is None


def test_identity_iso():
    image, phi = apply_iso(E1, WIso())
    assert image == E1 and phi(P23) == P23


def test_translation_matches_oracle(derived):
    image, phi = apply_iso(E1, WIso(1, 2, 0, 3))
    want = derived["translate_x3p1_r2_t3"]
    assert image == Curve(want["a1"], want["a2"], want["a3"], want["a4"], want["a6"])
    assert str(image) == "y^2 + 6*y = x^3 + 6*x^2 + 12*x"
    assert phi(P23) == Point(0, 0)


def test_iso_rejects_zero_scale():
    with pytest.raises(InputError):
        WIso(0)


def test_tate_from_2_3():
    tate, iso = tate_normal_form(E1, P23)
    assert (tate.a1, tate.a2, tate.a3, tate.a4, tate.a6) == (Fraction(4, 3), Fraction(2, 9), Fraction(2, 9), 0, 0)
    assert tate.tate_parameters() == (Fraction(-2, 9), Fraction(-1, 3))
    assert iso.map_point(P23) == Point(0, 0)
    assert str(tate) == "y^2 + 4/3*x*y + 2/9*y = x^3 + 2/9*x^2"
    # negation in long form: (x, -y - a1*x - a3)
    assert negate(tate, Point(0, 0)) == Point(0, Fraction(-2, 9))
    assert add_points(tate, Point(0, 0), Point(0, Fraction(-2, 9))) == INFINITY


def test_tate_from_order_three_point():
    with pytest.raises(OrderTooSmall):
        tate_normal_form(E1, Point(0, 1))
    with pytest.raises(OrderTooSmall):
        tate_normal_form(E1, Point(-1, 0))


def test_tate_from_2_minus_3():
    tate, iso = tate_normal_form(E1, Point(2, -3))
    assert tate.is_tate
    assert point_order(tate, Point(0, 0)) == 6
    assert iso.map_point(Point(2, -3)) == Point(0, 0)
    # the negated point gives the same Tate model
    assert tate == tate_normal_form(E1, P23)[0]


def test_tate_rejects_off_curve():
    with pytest.raises(PointNotOnCurve):
        tate_normal_form(E1, Point(1, 1))


# -- random points over quadratic fields -------------------------------------


def _v(z):
    return z.v if isinstance(z, QuadElem) else 0


def curve_through(x: QuadElem, y: QuadElem) -> Curve:
    """The rational short curve through (x, y): the sqrt(d)-part fixes b, the rest fixes a."""
    b = (_v(y * y) - _v(x * x * x)) / x.v
    a = (y * y - x * x * x - b * x).u
    return Curve.short(b, a)


def random_setup(rng: random.Random):
    while True:
        K = QuadField(rng.choice(FIELD_SEEDS))
        x = QuadElem(Fraction(rng.randint(-9, 9), rng.randint(1, 3)), Fraction(rng.randint(1, 5), rng.randint(1, 3)), K)
        y = QuadElem(Fraction(rng.randint(-9, 9), rng.randint(1, 3)), Fraction(rng.randint(-5, 5), rng.randint(1, 3)), K)
        c = curve_through(x, y)
        if c.discriminant != 0:
            return c, Point(x, y), Point(x.conj(), y.conj())


def small_combo(c, p, q, rng):
    m, n = rng.randint(-2, 2), rng.randint(-2, 2)
    return add_points(c, scalar_mul(c, m, p), scalar_mul(c, n, q))


def test_group_law_samples():
    rng = random.Random(20261015)
    for _ in range(1000):
        c, p, q = random_setup(rng)
        r = small_combo(c, p, q, rng)
        s = add_points(c, p, r)
        assert c.contains(s)
        assert add_points(c, p, INFINITY) == p == add_points(c, INFINITY, p)
        assert add_points(c, p, negate(c, p)) == INFINITY
        assert add_points(c, p, r) == add_points(c, r, p)


def _torsion_triples():
    cases = [(Curve.short(0, 1), -3), (Curve.short(0, 16), -3), (Curve.short(-1, 0), -1), (Curve.short(0, 1), 2)]
    groups = []
    for c, d in cases:
        groups.append((c, torsion_subgroup(c, QuadField(d)).points))
    return groups


def test_associativity_on_torsion():
    rng = random.Random(7)
    groups = _torsion_triples()
    for _ in range(200):
        c, pts = rng.choice(groups)
        p, q, r = (rng.choice(pts) for _ in range(3))
        assert add_points(c, add_points(c, p, q), r) == add_points(c, p, add_points(c, q, r))


def test_associativity_generic():
    rng = random.Random(11)
    for _ in range(200):
        c, p, q = random_setup(rng)
        r = small_combo(c, p, q, rng)
        assert add_points(c, add_points(c, p, q), r) == add_points(c, p, add_points(c, q, r))


@given(
    st.tuples(rationals(5, 3), rationals(5, 3), rationals(5, 3), rationals(5, 3)).filter(lambda t: t[0] != 0),
    st.integers(0, 1000),
)
@settings(max_examples=100)
def test_iso_preserves_law_and_orders(params, seed):
    rng = random.Random(seed)
    c, p, q = random_setup(rng)
    iso = WIso(*params)
    image, phi = apply_iso(c, iso)
    back = iso.inverse()
    assert back.map_curve(image) == c
    for pt in (p, q, add_points(c, p, q)):
        assert image.contains(phi(pt))
        assert back.map_point(phi(pt)) == pt
    assert phi(add_points(c, p, q)) == add_points(image, phi(p), phi(q))
    assert iso.then(back).map_point(p) == p


def test_iso_preserves_torsion_orders():
    for c, pts in _torsion_triples():
        _, phi = apply_iso(c, WIso(Fraction(2, 3), 1, Fraction(-1, 2), 5))
        image = WIso(Fraction(2, 3), 1, Fraction(-1, 2), 5).map_curve(c)
        for p in pts:
            assert point_order(image, phi(p)) == point_order(c, p)


def kubert(N, t):
    t = Fraction(t)
    if N == 4:
        return t, Fraction(0)
    if N == 5:
        return t, t
    if N == 6:
        return t + t * t, t
    if N == 7:
        return t**3 - t**2, t * t - t
    if N == 8:
        b = (2 * t - 1) * (t - 1)
        return b, b / t
    if N == 9:
        c = t * t * (t - 1)
        return c * (t * t - t + 1), c
    d = t * t / (t - (t - 1) ** 2)
    c = t * d - t
    return c * d, c


@pytest.mark.parametrize("N", range(4, 11))
@pytest.mark.parametrize("t", [2, 3, Fraction(1, 3), Fraction(5, 2)])
def test_tate_round_trip_on_families(N, t):
    E = Curve.tate(*kubert(N, t))
    validate(E)
    short, to_short = short_model(E)
    p = to_short.map_point(Point(0, 0))
    assert short.is_short and short.contains(p)
    assert point_order(short, p) == N
    tate, iso = tate_normal_form(short, p)
    assert tate.is_tate
    assert iso.map_point(p) == Point(0, 0)
    assert point_order(tate, Point(0, 0)) == N
