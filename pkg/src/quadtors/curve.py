"""Weierstrass curves with rational coefficients and their points over Q(sqrt(d)).

Every curve is stored in long Weierstrass form
``y^2 + a1*x*y + a3*y = x^3 + a2*x^2 + a4*x + a6``.  The short form
``y^2 = x^3 + b*x + a`` and the Tate normal form
``y^2 + (1 - c)*x*y - b*y = x^3 - b*x^2`` are constructors and views.
Point coordinates are Fractions or QuadElems; both obey the same operators.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .arith import as_rat, format_rat, format_scalar
from .errors import InputError, OrderTooSmall, PointNotOnCurve, SingularCurve

# no element of a torsion group over a quadratic field has larger order
MAX_TORSION_ORDER = 18


@dataclass(frozen=True)
class Point:
    x: object = None
    y: object = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __str__(self):
        if self.is_infinity:
            return "O"
        return f"({format_scalar(self.x)}, {format_scalar(self.y)})"


INFINITY = Point()


@dataclass(frozen=True)
class Curve:
    a1: Fraction = Fraction(0)
    a2: Fraction = Fraction(0)
    a3: Fraction = Fraction(0)
    a4: Fraction = Fraction(0)
    a6: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, as_rat(getattr(self, name)))

    @classmethod
    def short(cls, b, a) -> "Curve":
        """``y^2 = x^3 + b*x + a``."""
        return cls(0, 0, 0, b, a)

    @classmethod
    def tate(cls, b, c) -> "Curve":
        """``y^2 + (1 - c)*x*y - b*y = x^3 - b*x^2``."""
        b, c = as_rat(b), as_rat(c)
        if b == 0:
            raise InputError("Tate normal form requires b != 0")
        return cls(1 - c, -b, -b, 0, 0)

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def is_short(self) -> bool:
        return self.a1 == 0 and self.a2 == 0 and self.a3 == 0

    @property
    def is_tate(self) -> bool:
        return self.a4 == 0 and self.a6 == 0 and self.a2 == self.a3 != 0

    def tate_parameters(self) -> tuple[Fraction, Fraction]:
        """``(b, c)`` of a curve already in Tate normal form."""
        if not self.is_tate:
            raise InputError("curve is not in Tate normal form")
        return -self.a2, 1 - self.a1

    @property
    def b(self) -> Fraction:
        """Linear coefficient of a short model."""
        return self.a4

    @property
    def a(self) -> Fraction:
        """Constant coefficient of a short model."""
        return self.a6

    @property
    def discriminant(self) -> Fraction:
        a1, a2, a3, a4, a6 = self.coefficients
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def contains(self, p: Point) -> bool:
        if p.is_infinity:
            return True
        x, y = p.x, p.y
        lhs = y * y + self.a1 * x * y + self.a3 * y
        rhs = x * x * x + self.a2 * x * x + self.a4 * x + self.a6
        return lhs == rhs

    def __str__(self):
        lhs = "y^2" + _terms([(self.a1, "x*y"), (self.a3, "y")])
        rhs = "x^3" + _terms([(self.a2, "x^2"), (self.a4, "x"), (self.a6, "")])
        return f"{lhs} = {rhs}"


def _terms(pairs) -> str:
    out = ""
    for coeff, mono in pairs:
        if coeff == 0:
            continue
        sign = " - " if coeff < 0 else " + "
        mag = format_rat(abs(coeff))
        if not mono:
            body = mag
        elif abs(coeff) == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        out += sign + body
    return out


def validate(c: Curve) -> None:
    if c.discriminant == 0:
        raise SingularCurve(f"singular curve: {c}")


def _require_on(c: Curve, *points: Point) -> None:
    for p in points:
        if not c.contains(p):
            raise PointNotOnCurve(f"{p} is not on {c}")


def negate(c: Curve, p: Point) -> Point:
    if p.is_infinity:
        return p
    return Point(p.x, -p.y - c.a1 * p.x - c.a3)


def _add(c: Curve, p: Point, q: Point) -> Point:
    if p.is_infinity:
        return q
    if q.is_infinity:
        return p
    a1, a2, a3, a4, _ = c.coefficients
    x1, y1, x2, y2 = p.x, p.y, q.x, q.y
    if x1 == x2:
        if y1 + y2 + a1 * x2 + a3 == 0:
            return INFINITY
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return Point(x3, y3)


def add_points(c: Curve, p: Point, q: Point) -> Point:
    _require_on(c, p, q)
    return _add(c, p, q)


def _mul(c: Curve, k: int, p: Point) -> Point:
    if k < 0:
        k, p = -k, negate(c, p)
    result = INFINITY
    while k:
        if k & 1:
            result = _add(c, result, p)
        p = _add(c, p, p)
        k >>= 1
    return result


def scalar_mul(c: Curve, k: int, p: Point) -> Point:
    _require_on(c, p)
    return _mul(c, k, p)


def _order(c: Curve, p: Point, bound: int) -> Optional[int]:
    q = p
    for k in range(1, bound + 1):
        if q.is_infinity:
            return k
        q = _add(c, q, p)
    return None


def point_order(c: Curve, p: Point, bound: int = MAX_TORSION_ORDER) -> Optional[int]:
    """Least ``k <= bound`` with ``k*p = O``, or None when there is none."""
    _require_on(c, p)
    return _order(c, p, bound)


@dataclass(frozen=True)
class WIso:
    """Substitution ``x = u^2 x' + r``, ``y = u^3 y' + s u^2 x' + t``."""

    u: Fraction = Fraction(1)
    r: Fraction = Fraction(0)
    s: Fraction = Fraction(0)
    t: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("u", "r", "s", "t"):
            object.__setattr__(self, name, as_rat(getattr(self, name)))
        if self.u == 0:
            raise InputError("isomorphism scale u must be nonzero")

    def then(self, other: "WIso") -> "WIso":
        """Apply ``self`` first, then ``other``."""
        u, r, s, t = self.u, self.r, self.s, self.t
        return WIso(
            u * other.u,
            r + u * u * other.r,
            s + u * other.s,
            t + u**3 * other.t + s * u * u * other.r,
        )

    def inverse(self) -> "WIso":
        u, r, s, t = self.u, self.r, self.s, self.t
        return WIso(1 / u, -r / u**2, -s / u, (r * s - t) / u**3)

    def map_curve(self, c: Curve) -> Curve:
        u, r, s, t = self.u, self.r, self.s, self.t
        a1, a2, a3, a4, a6 = c.coefficients
        return Curve(
            (a1 + 2 * s) / u,
            (a2 - s * a1 + 3 * r - s * s) / u**2,
            (a3 + r * a1 + 2 * t) / u**3,
            (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u**4,
            (a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1) / u**6,
        )

    def map_point(self, p: Point) -> Point:
        if p.is_infinity:
            return p
        u, r, s, t = self.u, self.r, self.s, self.t
        xr = p.x - r
        return Point(xr / u**2, (p.y - s * xr - t) / u**3)

    def __str__(self):
        return "u={}, r={}, s={}, t={}".format(*(format_rat(v) for v in (self.u, self.r, self.s, self.t)))


def apply_iso(c: Curve, iso: WIso) -> tuple[Curve, Callable[[Point], Point]]:
    validate(c)
    return iso.map_curve(c), iso.map_point


def tate_normal_form(c: Curve, p: Point) -> tuple[Curve, WIso]:
    """Move ``p`` to (0, 0) and normalize to ``y^2 + (1-c)xy - by = x^3 - bx^2``.

    Translate ``p`` to the origin, shear away the ``x`` term, then rescale so
    that ``a2 = a3``.  Points of order 2 or 3 leave ``a3`` or ``a2`` zero and
    have no such model.
    """
    validate(c)
    _require_on(c, p)
    if p.is_infinity:
        raise OrderTooSmall("the point at infinity has no Tate normal form")
    order = _order(c, p, 3)
    if order is not None:
        raise OrderTooSmall(f"{p} has order {order}; Tate normal form needs order >= 4")
    if not (isinstance(p.x, (int, Fraction)) or p.x.v == 0) or not (
        isinstance(p.y, (int, Fraction)) or p.y.v == 0
    ):
        raise InputError("Tate normal form is implemented for rational points only")
    iso = WIso(1, as_rat(p.x), 0, as_rat(p.y))
    moved = iso.map_curve(c)
    shear = WIso(1, 0, moved.a4 / moved.a3, 0)
    iso = iso.then(shear)
    moved = shear.map_curve(moved)
    scale = WIso(moved.a3 / moved.a2, 0, 0, 0)
    iso = iso.then(scale)
    return scale.map_curve(moved), iso


def short_model(c: Curve) -> tuple[Curve, WIso]:
    """Short model ``y^2 = x^3 - 27*c4*x - 54*c6`` and the isomorphism onto it."""
    a1, a2, a3, a4, a6 = c.coefficients
    b2 = a1 * a1 + 4 * a2
    r = -b2 / 12
    iso = WIso(Fraction(1, 6), r, -a1 / 2, -(a3 + a1 * r) / 2)
    return iso.map_curve(c), iso
