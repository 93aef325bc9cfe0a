"""Univariate polynomials over Q and their roots in Q and Q(sqrt(d)).

Roots in a quadratic field come from two places: rational roots, and
irreducible quadratic factors ``x**2 - s*x + t`` over Q whose discriminant
``s**2 - 4*t`` is ``d`` times a rational square.  Quadratic factors are
located numerically and then certified by exact division, so a returned
root is always exact; completeness is guarded by escalating precision
whenever a numerically plausible candidate fails its certificate.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, NamedTuple, Optional

import mpmath
import numpy as np
from sympy import divisors

from .arith import QuadElem, QuadField, format_rat, is_rational_square
from .errors import InputError, PrecisionExhausted, ZeroPolynomial

# denominator-bound schedule for rational reconstruction (bits)
RECONSTRUCTION_BITS = (48, 96, 192, 384, 512)

# beyond these sizes the rational root theorem is replaced by numeric candidates
_THEOREM_COEFF_LIMIT = 10**18
_THEOREM_MAX_CANDIDATES = 20000


class QPoly:
    """Immutable polynomial with Fraction coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("QPoly is immutable")

    @classmethod
    def x(cls) -> "QPoly":
        return cls((0, 1))

    @classmethod
    def from_roots(cls, roots) -> "QPoly":
        return reduce(lambda acc, r: acc * cls((-r, 1)), roots, cls((1,)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    @staticmethod
    def _lift(other) -> Optional["QPoly"]:
        if isinstance(other, QPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return QPoly((other,))
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return QPoly(self[i] + o[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return QPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QPoly(c * other for c in self.coeffs)
        if not isinstance(other, QPoly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return QPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return QPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = QPoly((1,))
        for _ in range(k):
            result = result * self
        return result

    def __divmod__(self, other: "QPoly"):
        other = self._lift(other)
        if other is None or other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        inv_lead = 1 / other.lead
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq] * inv_lead
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return QPoly(quot), QPoly(rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "QPoly":
        return QPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "QPoly":
        if self.is_zero():
            return self
        return self * (1 / self.lead)

    def primitive(self) -> tuple[Fraction, tuple[int, ...]]:
        """``(content, ints)`` with ``self == content * ints``; ints primitive, positive lead."""
        if self.is_zero():
            return Fraction(0), ()
        den = reduce(math.lcm, (c.denominator for c in self.coeffs), 1)
        ints = [int(c * den) for c in self.coeffs]
        g = reduce(math.gcd, ints)
        if ints[-1] < 0:
            g = -g
        return Fraction(g, den), tuple(i // g for i in ints)

    def divides(self, other: "QPoly") -> bool:
        return (other % self).is_zero()

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"QPoly({[format_rat(c) for c in self.coeffs]})"

    def to_str(self, var: str = "x") -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = format_rat(abs(c))
            if i == 0:
                body = mag
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if abs(c) == 1 else f"{mag}*{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    __str__ = to_str


def poly_gcd(p: QPoly, q: QPoly) -> QPoly:
    """Monic gcd over Q by the Euclidean algorithm."""
    if p.is_zero() and q.is_zero():
        raise ZeroPolynomial("gcd of two zero polynomials")
    a, b = p.monic(), q.monic()
    while not b.is_zero():
        a, b = b, (a % b).monic()
    return a.monic()


def squarefree_part(p: QPoly) -> QPoly:
    if p.degree < 1:
        return p.monic()
    return (p // poly_gcd(p, p.derivative())).monic()


def _eval_int_at(ints, r: Fraction) -> bool:
    n = len(ints) - 1
    total = 0
    for i, c in enumerate(ints):
        total += c * r.numerator**i * r.denominator ** (n - i)
    return total == 0


def _theorem_roots(ints: tuple[int, ...]) -> Optional[set[Fraction]]:
    """Rational roots by the rational root theorem; None when the candidate set is unwieldy.

    ``ints`` must have a nonzero constant term.
    """
    a0, an = abs(ints[0]), abs(ints[-1])
    if max(a0, an) > _THEOREM_COEFF_LIMIT:
        return None
    nums, dens = divisors(a0), divisors(an)
    if len(nums) * len(dens) > _THEOREM_MAX_CANDIDATES:
        return None
    roots = set()
    for q in dens:
        for n in nums:
            if math.gcd(n, q) != 1:
                continue
            for cand in (Fraction(n, q), Fraction(-n, q)):
                if _eval_int_at(ints, cand):
                    roots.add(cand)
    return roots


def _strip_zero_roots(ints: tuple[int, ...]) -> tuple[tuple[int, ...], bool]:
    k = 0
    while ints[k] == 0:
        k += 1
    return ints[k:], k > 0


def rational_roots(p: QPoly) -> set[Fraction]:
    """All rational roots, via the rational root theorem on the primitive integer form.

    When the constant or leading coefficient is too large to enumerate its
    divisors, candidates come from the certified numeric search instead.
    """
    if p.is_zero():
        raise ZeroPolynomial("rational roots of the zero polynomial")
    ints, has_zero = _strip_zero_roots(p.primitive()[1])
    roots = {Fraction(0)} if has_zero else set()
    if len(ints) == 1:
        return roots
    found = _theorem_roots(ints)
    if found is None:
        found = _factor_data(squarefree_part(QPoly(ints)).primitive()[1]).rational_roots
    return roots | set(found)


class FactorData(NamedTuple):
    rational_roots: frozenset
    quadratic_factors: frozenset  # {(s, t)}: irreducible x^2 - s*x + t dividing p


def quadratic_factors(p: QPoly) -> FactorData:
    """Rational roots and irreducible rational quadratic factors of ``p``."""
    if p.is_zero():
        raise ZeroPolynomial("quadratic factors of the zero polynomial")
    sqf = squarefree_part(p)
    return _factor_data(sqf.primitive()[1] if sqf.degree > 0 else (1,))


# -- numeric location --------------------------------------------------------


class _Retry(Exception):
    pass


def _snap(x, lead: int, tol, margin) -> Optional[Fraction]:
    """``round(lead*x)/lead`` when ``lead*x`` is within ``tol`` of an integer.

    Returns None when it is at least ``margin`` away; anything in between is
    undecided at this precision.
    """
    y = x * lead
    n = mpmath.nint(y)
    dist = abs(y - n)
    if dist <= tol:
        return Fraction(int(n), lead)
    if dist >= margin:
        return None
    raise _Retry


def _is_real(z, lead: int, tol, margin) -> bool:
    im = abs(z.imag) * lead
    if im <= tol:
        return True
    if im >= margin:
        return False
    raise _Retry


def _horner_with_derivative(coeffs_high, z):
    p = coeffs_high[0]
    dp = 0
    for c in coeffs_high[1:]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _numeric_roots(ints: tuple[int, ...], prec: int):
    """All complex roots of a squarefree integer polynomial at ``prec`` bits.

    Aberth-Ehrlich iteration in multiprecision, seeded from the
    companion-matrix eigenvalues (or a circle when those are unusable).
    Returns ``(roots, relative_error_estimate)``.
    """
    n = len(ints) - 1
    # exact coefficients: rounding them would perturb ill-conditioned roots
    work = prec + max(abs(c) for c in ints).bit_length()
    with mpmath.workprec(work):
        high = [mpmath.mpf(c) for c in reversed(ints)]
        seed_sets = []
        try:
            seeds = np.roots(np.array([float(c) for c in reversed(ints)]))
            if len(seeds) == n and np.all(np.isfinite(seeds)):
                seed_sets.append([mpmath.mpc(complex(z)) for z in seeds])
        except (OverflowError, np.linalg.LinAlgError, ValueError):
            pass
        radius = 1 + max(abs(mpmath.mpf(c)) for c in ints[:-1]) / abs(ints[-1])
        radius = min(radius, mpmath.mpf(2) ** 64)
        seed_sets.append(
            [radius * mpmath.expjpi(2 * mpmath.mpf(k) / n + mpmath.mpf(1) / (2 * n)) for k in range(n)]
        )
        for seeds in seed_sets:
            result = _aberth(high, _separate(seeds), prec)
            if result is not None:
                return result
    raise _Retry


def _refine(ints: tuple[int, ...], roots, prec: int):
    work = prec + max(abs(c) for c in ints).bit_length()
    with mpmath.workprec(work):
        high = [mpmath.mpf(c) for c in reversed(ints)]
        result = _aberth(high, [mpmath.mpc(z) for z in roots], prec)
    if result is None:
        raise _Retry
    return result[0]


def _separate(seeds):
    """Nudge coincident seeds apart; Aberth needs pairwise distinct starts."""
    out = []
    for k, z in enumerate(seeds):
        while any(z == w for w in out):
            z += mpmath.mpc(1e-6, 1e-6) * (1 + abs(z)) * (k + 1)
        out.append(z)
    return out


def _aberth(high, zs, prec, max_iter=400):
    eps = mpmath.mpf(2) ** (-(prec - 16))
    zs = list(zs)
    n = len(zs)
    for _ in range(max_iter):
        worst = mpmath.mpf(0)
        for i in range(n):
            zi = zs[i]
            p, dp = _horner_with_derivative(high, zi)
            if p == 0:
                continue
            ratio = p / dp if dp != 0 else mpmath.mpc(eps, eps)
            repulsion = mpmath.fsum(1 / (zi - zs[j]) for j in range(n) if j != i)
            step = ratio / (1 - ratio * repulsion)
            zs[i] = zi - step
            worst = max(worst, abs(step) / max(1, abs(zs[i])))
        if worst <= eps:
            return zs, worst
    return None


def _certify_quadratic(ints: tuple[int, ...], s: Fraction, t: Fraction) -> bool:
    divisor = QPoly((t, -s, 1))
    return divisor.divides(QPoly(ints))


@lru_cache(maxsize=4096)
def _factor_data(ints: tuple[int, ...]) -> FactorData:
    """Certified rational roots and quadratic factors of a squarefree integer polynomial."""
    n = len(ints) - 1
    if n <= 0:
        return FactorData(frozenset(), frozenset())
    if n == 1:
        return FactorData(frozenset({Fraction(-ints[0], ints[1])}), frozenset())
    if n == 2:
        c, b, a = ints
        disc = Fraction(b * b - 4 * a * c)
        r = is_rational_square(disc)
        if r is not None:
            return FactorData(
                frozenset({(-b + r) / (2 * a), (-b - r) / (2 * a)}), frozenset()
            )
        return FactorData(frozenset(), frozenset({(Fraction(-b, a), Fraction(c, a))}))

    lead = abs(ints[-1])
    for bits in RECONSTRUCTION_BITS:
        if lead > (1 << bits):
            continue
        prec = 2 * bits + 64 + lead.bit_length()
        try:
            return _locate(ints, bits, prec)
        except _Retry:
            continue
    raise PrecisionExhausted(f"could not resolve roots of degree-{n} polynomial")


def _locate(ints: tuple[int, ...], bits: int, prec: int) -> FactorData:
    """Rational roots and quadratic factors read off from numeric roots.

    A primitive factor ``c*x**2 + e*x + f`` has ``c`` dividing the leading
    coefficient L, so L times its root sum and product are integers; the same
    holds for L times a rational root.
    """
    n = len(ints) - 1
    lead = abs(ints[-1])
    roots, _ = _numeric_roots(ints, prec)
    # lead*z*z' must be accurate in absolute terms, so large roots need more bits
    size = max(1, int(mpmath.log(max(abs(z) for z in roots) + 1, 2)) + 1)
    if 2 * size > 32:
        prec += 2 * size
        roots = _refine(ints, roots, prec)
    with mpmath.workprec(prec):
        tol = mpmath.mpf(2) ** (-bits)
        margin = mpmath.mpf(2) ** (-(bits // 2))
        rational = set()
        is_rat_root = [False] * n
        for i, z in enumerate(roots):
            if _is_real(z, lead, tol, margin):
                r = _snap(z.real, lead, tol, margin)
                if r is not None:
                    if not _eval_int_at(ints, r):
                        raise _Retry
                    rational.add(r)
                    is_rat_root[i] = True
        quads = set()
        for i in range(n):
            if is_rat_root[i]:
                continue
            for j in range(i + 1, n):
                if is_rat_root[j]:
                    continue
                s = roots[i] + roots[j]
                t = roots[i] * roots[j]
                if not (_is_real(s, lead, tol, margin) and _is_real(t, lead, tol, margin)):
                    continue
                s_rat = _snap(s.real, lead, tol, margin)
                if s_rat is None:
                    continue
                t_rat = _snap(t.real, lead, tol, margin)
                if t_rat is None:
                    continue
                if not _certify_quadratic(ints, s_rat, t_rat):
                    raise _Retry
                if is_rational_square(s_rat * s_rat - 4 * t_rat) is None:
                    quads.add((s_rat, t_rat))
    if len(rational) + 2 * len(quads) > n:
        raise _Retry
    return FactorData(frozenset(rational), frozenset(quads))


# -- exhaustive exact search -------------------------------------------------


_PROBES = (1, -1, 2, -2, 3, -3, 4, -4)


def _exhaustive_quadratics(ints: tuple[int, ...]) -> set[tuple[Fraction, Fraction]]:
    """Irreducible quadratic factors by integer divisor search.

    ``p`` must have no rational roots.  Each factor found is divided out
    before searching again, so the divisor sets shrink as the search goes.
    """
    found = set()
    p = QPoly(ints)
    while p.degree >= 2:
        hit = _first_quadratic(p.primitive()[1])
        if hit is None:
            break
        found.add(hit)
        p = p // QPoly((hit[1], -hit[0], 1))
    return found


def _first_quadratic(ints: tuple[int, ...]) -> Optional[tuple[Fraction, Fraction]]:
    # a primitive factor q = c*x^2 + e*x + f has c | lead, f | p(0) and q(k) | p(k)
    values = {k: _eval_int(ints, k) for k in _PROBES}
    if 0 in values.values():
        raise InputError("exhaustive search needs a polynomial without rational roots")
    k = min(_PROBES, key=lambda j: len(divisors(abs(values[j]))))
    q_k = [g for g_abs in divisors(abs(values[k])) for g in (g_abs, -g_abs)]
    for c in divisors(abs(ints[-1])):
        for f_abs in divisors(abs(ints[0])):
            for f in (f_abs, -f_abs):
                for g in q_k:
                    e, rem = divmod(g - c * k * k - f, k)
                    if rem:
                        continue
                    probes = [c * j * j + e * j + f for j in _PROBES]
                    # a zero probe means a rational root, so q is reducible
                    if 0 in probes or any(values[j] % q for j, q in zip(_PROBES, probes)):
                        continue
                    s, t = Fraction(-e, c), Fraction(f, c)
                    if is_rational_square(s * s - 4 * t) is None and _certify_quadratic(ints, s, t):
                        return s, t
    return None


def _eval_int(ints: tuple[int, ...], k: int) -> int:
    total = 0
    for c in reversed(ints):
        total = total * k + c
    return total


EXHAUSTIVE_MAX_DEGREE = 16


def roots_in_quadratic_field(
    p: QPoly, field: QuadField, exhaustive: bool = False
) -> set[QuadElem]:
    """All roots of ``p`` lying in ``field``, rational roots included.

    ``exhaustive=True`` replaces the numeric search with an exact divisor
    search (degree <= 16 only).
    """
    if p.is_zero():
        raise ZeroPolynomial("roots of the zero polynomial")
    sqf = squarefree_part(p)
    if sqf.degree < 1:
        return set()
    ints, has_zero = _strip_zero_roots(sqf.primitive()[1])
    rats = {Fraction(0)} if has_zero else set()
    found = _theorem_roots(ints) if len(ints) > 1 else set()
    if found is None and not exhaustive:
        data = _factor_data(ints)
        rats |= data.rational_roots
        quads = data.quadratic_factors
    else:
        if found is None:
            found = _factor_data(ints).rational_roots
        rats |= found
        rest = QPoly(ints)
        for r in found:
            rest = rest // QPoly((-r, 1))
        if rest.degree < 2:
            quads = set()
        elif exhaustive:
            if rest.degree > EXHAUSTIVE_MAX_DEGREE:
                raise InputError(f"exhaustive search limited to degree {EXHAUSTIVE_MAX_DEGREE}")
            quads = _exhaustive_quadratics(rest.primitive()[1])
        else:
            quads = _factor_data(rest.primitive()[1]).quadratic_factors
    out = {QuadElem(r, 0, field) for r in rats}
    for s, t in quads:
        out |= _roots_of_quadratic(s, t, field)
    return out


def _roots_of_quadratic(s: Fraction, t: Fraction, field: QuadField) -> set[QuadElem]:
    w = is_rational_square((s * s - 4 * t) / field.d)
    if w is None:
        return set()
    return {QuadElem(s / 2, w / 2, field), QuadElem(s / 2, -w / 2, field)}


def field_of_quadratic(s: Fraction, t: Fraction) -> int:
    """Squarefree d with the roots of x**2 - s*x + t in Q(sqrt(d))."""
    from .arith import squarefree_kernel

    disc = s * s - 4 * t
    return squarefree_kernel(disc.numerator * disc.denominator)
