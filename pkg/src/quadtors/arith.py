"""Exact rationals and elements of quadratic fields Q(sqrt(d)).

Rationals are :class:`fractions.Fraction`, which already keeps lowest terms
with a positive denominator.  A :class:`QuadElem` is ``u + v*sqrt(d)`` with
rational ``u`` and ``v``; it interoperates with ``int`` and ``Fraction``
operands, so rational points and quadratic points share one code path.
"""
from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from sympy import factorint

from .errors import FieldMismatch, InputError

Rat = Fraction
Scalar = Union[int, Fraction, "QuadElem"]


def as_rat(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, QuadElem):
        if value.v != 0:
            raise InputError(f"{value} is not rational")
        return value.u
    if isinstance(value, str):
        return parse_rat(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rat(r: Fraction) -> str:
    r = Fraction(r)
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def parse_rat(text: str) -> Fraction:
    text = text.strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
        raise InputError(f"malformed rational {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise InputError(f"zero denominator in {text!r}") from None


def squarefree_kernel(n: int) -> int:
    """Product of the primes dividing ``n`` to an odd power, keeping the sign."""
    if n == 0:
        raise InputError("squarefree kernel of 0 is undefined")
    kernel = 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            kernel *= p
    return kernel if n > 0 else -kernel


def is_rational_square(r) -> Optional[Fraction]:
    """Nonnegative rational square root of ``r``, or None."""
    r = as_rat(r)
    if r < 0:
        return None
    num, den = math.isqrt(r.numerator), math.isqrt(r.denominator)
    if num * num == r.numerator and den * den == r.denominator:
        return Fraction(num, den)
    return None


@dataclass(frozen=True)
class QuadField:
    d: int

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d in (0, 1):
            raise InputError(f"d must be an integer other than 0 and 1, got {self.d!r}")
        if squarefree_kernel(self.d) != self.d:
            raise InputError(f"d = {self.d} is not squarefree")

    @classmethod
    def from_int(cls, n: int) -> "QuadField":
        """Field Q(sqrt(n)) for arbitrary nonzero ``n``, canonicalizing ``n``.

        A non-squarefree ``n`` is replaced by its squarefree kernel and a
        warning is emitted; ``n`` that reduces to 0 or 1 is rejected.
        """
        if n == 0:
            raise InputError("d = 0 does not define a quadratic field")
        k = squarefree_kernel(n)
        if k == 1:
            raise InputError(f"d = {n} is a square; Q(sqrt({n})) = Q is not quadratic")
        if k != n:
            warnings.warn(f"d = {n} replaced by its squarefree kernel {k}", stacklevel=2)
        return cls(k)

    @property
    def is_eisenstein(self) -> bool:
        return self.d == -3

    def __call__(self, u=0, v=0) -> "QuadElem":
        return QuadElem(u, v, self)

    @property
    def sqrt_d(self) -> "QuadElem":
        return QuadElem(0, 1, self)

    def __str__(self):
        return f"Q(sqrt({self.d}))"


class QuadElem:
    """The element ``u + v*sqrt(d)`` of ``field``."""

    __slots__ = ("u", "v", "field")

    def __init__(self, u, v, field: QuadField):
        object.__setattr__(self, "u", as_rat(u))
        object.__setattr__(self, "v", as_rat(v))
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("QuadElem is immutable")

    @property
    def d(self) -> int:
        return self.field.d

    def is_rational(self) -> bool:
        return self.v == 0

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def conj(self) -> "QuadElem":
        return QuadElem(self.u, -self.v, self.field)

    def norm(self) -> Fraction:
        return self.u * self.u - self.field.d * self.v * self.v

    def trace(self) -> Fraction:
        return 2 * self.u

    def _pair(self, other):
        if isinstance(other, (int, Fraction)):
            return self, QuadElem(other, 0, self.field)
        if not isinstance(other, QuadElem):
            return None, None
        if other.field == self.field:
            return self, other
        # rationals are field-agnostic; genuine irrationals must agree
        if other.v == 0:
            return self, QuadElem(other.u, 0, self.field)
        if self.v == 0:
            return QuadElem(self.u, 0, other.field), other
        raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return QuadElem(a.u + b.u, a.v + b.v, a.field)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.u, -self.v, self.field)

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return QuadElem(a.u - b.u, a.v - b.v, a.field)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadElem(self.u * other, self.v * other, self.field)
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        d = a.field.d
        return QuadElem(a.u * b.u + d * a.v * b.v, a.u * b.v + a.v * b.u, a.field)

    __rmul__ = __mul__

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in " + str(self.field))
        return QuadElem(self.u / n, -self.v / n, self.field)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return QuadElem(self.u / other, self.v / other, self.field)
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadElem(1, 0, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, QuadElem):
            if other.field != self.field:
                return self.v == 0 and other.v == 0 and self.u == other.u
            return self.u == other.u and self.v == other.v
        if isinstance(other, (int, Fraction)):
            return self.v == 0 and self.u == other
        return NotImplemented

    def __hash__(self):
        if self.v == 0:
            return hash(self.u)
        return hash((self.u, self.v, self.field.d))

    def __repr__(self):
        return f"QuadElem({self})"

    def __str__(self):
        d = self.field.d
        if self.v == 0:
            return format_rat(self.u)
        if self.v == 1:
            rad = f"sqrt({d})"
        elif self.v == -1:
            rad = f"-sqrt({d})"
        else:
            rad = f"{format_rat(self.v)}*sqrt({d})"
        if self.u == 0:
            return rad
        if rad.startswith("-"):
            return f"{format_rat(self.u)} - {rad[1:]}"
        return f"{format_rat(self.u)} + {rad}"


_QUAD_RE = re.compile(
    r"(?P<u>[+-]?\d+(?:/\d+)?)?"
    r"(?:(?P<sign>[+-])?(?:(?P<v>\d+(?:/\d+)?)\*)?sqrt\((?P<d>[+-]?\d+)\))?"
)


def parse_quad(text: str, field: Optional[QuadField]):
    """Parse ``"u"``, ``"v*sqrt(d)"`` or ``"u + v*sqrt(d)"``.

    Returns a Fraction when no radical is present, otherwise a QuadElem whose
    radicand must match ``field``.
    """
    compact = text.replace(" ", "")
    m = _QUAD_RE.fullmatch(compact)
    if not compact or m is None or (m.group("u") is None and m.group("d") is None):
        raise InputError(f"malformed number {text!r}")
    u = parse_rat(m.group("u")) if m.group("u") else Fraction(0)
    if m.group("d") is None:
        return u
    if m.group("u") is not None and m.group("sign") is None:
        raise InputError(f"malformed number {text!r}")
    radicand = int(m.group("d"))
    if field is None or radicand != field.d:
        raise InputError(f"{text!r} uses sqrt({radicand}) but the field is {field}")
    v = parse_rat(m.group("v")) if m.group("v") else Fraction(1)
    if m.group("sign") == "-":
        v = -v
    return QuadElem(u, v, field)


def format_scalar(x) -> str:
    if isinstance(x, QuadElem):
        return str(x)
    return format_rat(x)


def quad_arith(op: str, lhs: QuadElem, rhs: QuadElem) -> QuadElem:
    if lhs.field != rhs.field:
        raise FieldMismatch(f"{lhs.field} vs {rhs.field}")
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        return lhs / rhs
    raise ValueError(f"unknown operation {op!r}")


def quad_sqrt(s: QuadElem) -> Optional[QuadElem]:
    """A square root of ``s`` inside its own field, or None.

    With ``r = p + q*sqrt(d)``, ``r**2 = s`` forces ``p**2 + d*q**2 = u`` and
    ``2*p*q = v``, so ``p**2 = (u +- sqrt(norm(s))) / 2``.
    """
    field = s.field
    if s.v == 0:
        r = is_rational_square(s.u)
        if r is not None:
            return QuadElem(r, 0, field)
        q = is_rational_square(s.u / field.d)
        if q is not None:
            return QuadElem(0, q, field)
        return None
    n = is_rational_square(s.norm())
    if n is None:
        return None
    for p2 in ((s.u + n) / 2, (s.u - n) / 2):
        p = is_rational_square(p2)
        if p:
            root = QuadElem(p, s.v / (2 * p), field)
            if root * root == s:
                return root
    return None


def sqrt_in_field(value, field: QuadField):
    """Square root of a rational or field element within ``field``."""
    if not isinstance(value, QuadElem):
        value = QuadElem(value, 0, field)
    return quad_sqrt(value)
