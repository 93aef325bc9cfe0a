"""Torsion subgroups of y^2 = x^3 + b*x + a over quadratic fields.

The search is bounded first: for primes of good reduction that do not
ramify in K, the torsion of E(K) injects into E(F_p) (split p) or
E(F_{p^2}) (inert p), so the gcd of those point counts bounds the group
order.  Only the prime powers dividing that gcd have their division
polynomials rooted in K.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from sympy import factorint, integer_nthroot, multiplicity, primerange

from .arith import QuadElem, QuadField, quad_sqrt
from .curve import INFINITY, Curve, Point, WIso, _add, _mul, _order, validate
from .errors import BadReduction, InputError, InternalInconsistency, UnsupportedCase
from .ff import count_fp, count_fp2, legendre, reduce_mod, split_prime_power
from .poly import QPoly, roots_in_quadratic_field

KKM_GROUPS = frozenset(
    [(1, m) for m in range(1, 19) if m != 17]
    + [(2, 2 * m) for m in range(1, 7)]
    + [(3, 3), (3, 6), (4, 4)]
)
MAX_GROUP_ORDER = max(n1 * n2 for n1, n2 in KKM_GROUPS)  # 24
CLOSURE_CAP = 25

# largest admissible power of each prime occurring as an element order
PRIME_POWER_CAPS = ((2, 16), (3, 9), (5, 5), (7, 7), (11, 11), (13, 13))

REDUCTION_PRIMES = tuple(primerange(5, 200))
MIN_REDUCTION_PRIMES = 8


def group_label(n1: int, n2: int) -> str:
    if n1 == 1 and n2 == 1:
        return "trivial"
    if n1 == 1:
        return f"Z/{n2}"
    return f"Z/{n1} x Z/{n2}"


@dataclass(frozen=True)
class TorsionGroup:
    n1: int
    n2: int
    generators: tuple = field(default=(), compare=False)
    points: tuple = field(default=(), compare=False)

    @property
    def order(self) -> int:
        return self.n1 * self.n2

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n1, self.n2)

    @property
    def label(self) -> str:
        return group_label(self.n1, self.n2)

    def __str__(self):
        return self.label


def kkm_member(g) -> bool:
    shape = g.shape if isinstance(g, TorsionGroup) else tuple(g)
    return shape in KKM_GROUPS


def _require_short(c: Curve) -> None:
    if not c.is_short:
        raise InputError("torsion routines expect a short Weierstrass model y^2 = x^3 + bx + a")


# -- division polynomials ----------------------------------------------------

_DIVPOLY_CACHE: dict[tuple[Fraction, Fraction], list[QPoly]] = {}


def _division_polys(b: Fraction, a: Fraction, n: int) -> list[QPoly]:
    """``[f_0, ..., f_n]`` with f_k = psi_k for odd k and psi_k/(2y) for even k."""
    fs = _DIVPOLY_CACHE.get((b, a))
    if fs is None:
        fs = [
            QPoly(()),
            QPoly((1,)),
            QPoly((1,)),
            QPoly((-b * b, 12 * a, 6 * b, 0, 3)),
            QPoly((-8 * a * a - b**3, -4 * a * b, -5 * b * b, 20 * a, 5 * b, 0, 1)) * 2,
        ]
        _DIVPOLY_CACHE[(b, a)] = fs
    big_f = QPoly((a, b, 0, 1)) * 4
    f_sq = big_f * big_f
    while len(fs) <= n:
        k = len(fs)
        m = k // 2
        if k % 2:
            if m % 2 == 0:
                fk = f_sq * fs[m + 2] * fs[m] ** 3 - fs[m - 1] * fs[m + 1] ** 3
            else:
                fk = fs[m + 2] * fs[m] ** 3 - f_sq * fs[m - 1] * fs[m + 1] ** 3
        else:
            fk = fs[m] * (fs[m + 2] * fs[m - 1] ** 2 - fs[m - 2] * fs[m + 1] ** 2)
        fs.append(fk)
    return fs


def division_polynomial(c: Curve, n: int) -> QPoly:
    """x-only division polynomial: psi_n for odd n, psi_n/(2y) for even n."""
    _require_short(c)
    if not 1 <= n <= 18:
        raise InputError(f"division polynomial index {n} outside [1, 18]")
    return _division_polys(c.b, c.a, n)[n]


# -- small torsion -----------------------------------------------------------


def _lift_x(c: Curve, x: QuadElem) -> list[Point]:
    rhs = x * x * x + c.b * x + c.a
    y = quad_sqrt(rhs)
    if y is None:
        return []
    if y.is_zero():
        return [Point(x, y)]
    return [Point(x, y), Point(x, -y)]


def point_key(p: Point):
    if p.is_infinity:
        return (0,)
    x, y = p.x, p.y
    return (1, x.u, x.v, y.u, y.v) if isinstance(x, QuadElem) else (1, x, 0, y, 0)


def two_torsion(c: Curve, K: QuadField) -> set[Point]:
    """Points (x, 0) with x in K a root of x^3 + bx + a."""
    _require_short(c)
    validate(c)
    cubic = QPoly((c.a, c.b, 0, 1))
    zero = QuadElem(0, 0, K)
    return {Point(x, zero) for x in roots_in_quadratic_field(cubic, K)}


def three_torsion(c: Curve, K: QuadField) -> set[Point]:
    """All points of order 3 over K: K-roots of psi_3 whose y-coordinate lies in K."""
    _require_short(c)
    validate(c)
    out = set()
    for x in roots_in_quadratic_field(division_polynomial(c, 3), K):
        for p in _lift_x(c, x):
            if _order(c, p, 3) == 3:
                out.add(p)
    return out


# -- reduction bound ---------------------------------------------------------


def integral_scale(c: Curve) -> int:
    """Least u > 0 with u^4*b and u^6*a both integers."""
    _require_short(c)
    u = 1
    primes = factorint(c.b.denominator) | factorint(c.a.denominator)
    for p in primes:
        vb = multiplicity(p, c.b.denominator)
        va = multiplicity(p, c.a.denominator)
        u *= p ** max(-(-vb // 4), -(-va // 6))
    return u


def integral_model(c: Curve) -> tuple[int, int]:
    """Integer (b, a) of the short model scaled by (x, y) -> (u^2 x, u^3 y)."""
    u = integral_scale(c)
    return int(c.b * u**4), int(c.a * u**6)


@lru_cache(maxsize=65536)
def _count(b: int, a: int, p: int, degree: int) -> int:
    if degree == 1:
        return count_fp(b, a, p)
    return count_fp2(b, a, p)


def count_points_ff(c: Curve, q: int) -> int:
    """#E(F_q) for q = p or p^2, by enumerating x over F_q."""
    _require_short(c)
    p, degree = split_prime_power(q)
    if p < 5:
        raise BadReduction(f"p = {p} divides 6")
    try:
        b, a = reduce_mod(c.b, p), reduce_mod(c.a, p)
    except ZeroDivisionError:
        raise BadReduction(f"coefficients are not {p}-integral") from None
    if (4 * b**3 + 27 * a * a) % p == 0:
        raise BadReduction(f"bad reduction at p = {p}")
    return _count(b, a, p, degree)


def reduction_counts(c: Curve, K: QuadField) -> list[tuple[int, int, int]]:
    """``(p, residue_degree, #E(F_{p^f}))`` for the unramified good primes used."""
    validate(c)
    model = Curve.short(*integral_model(c))
    used = []
    g = 0
    for p in REDUCTION_PRIMES:
        if K.d % p == 0:
            continue
        degree = 1 if legendre(K.d, p) == 1 else 2
        try:
            n = count_points_ff(model, p**degree)
        except BadReduction:
            continue
        used.append((p, degree, n))
        g = math.gcd(g, n)
        if len(used) >= MIN_REDUCTION_PRIMES and g <= MAX_GROUP_ORDER:
            break
    if len(used) < 3:
        raise InternalInconsistency("fewer than three usable primes below 200")
    return used


def _reduction_gcd(c: Curve, K: QuadField) -> int:
    return math.gcd(*(n for _, _, n in reduction_counts(c, K)))


def torsion_order_bound(c: Curve, K: QuadField) -> int:
    """gcd of the reduction counts, clamped to the largest admissible order 24."""
    return min(_reduction_gcd(c, K), MAX_GROUP_ORDER)


# -- full torsion ------------------------------------------------------------


def _prime_order_points(c: Curve, K: QuadField, ell: int) -> set[Point]:
    if ell == 2:
        xs = roots_in_quadratic_field(QPoly((c.a, c.b, 0, 1)), K)
    else:
        xs = roots_in_quadratic_field(division_polynomial(c, ell), K)
    return {p for x in xs for p in _lift_x(c, x) if _mul(c, ell, p).is_infinity}


def _multiplication_x(c: Curve, m: int) -> tuple[QPoly, QPoly]:
    """(N, D) with x(mP) = N(x)/D(x)."""
    fs = _division_polys(c.b, c.a, m + 1)
    big_f = QPoly((c.a, c.b, 0, 1)) * 4
    x = QPoly.x()
    if m % 2:
        num, den = big_f * fs[m - 1] * fs[m + 1], fs[m] * fs[m]
    else:
        num, den = fs[m - 1] * fs[m + 1], big_f * fs[m] * fs[m]
    return x * den - num, den


def _division_preimages(c: Curve, K: QuadField, x_target, ell: int) -> set[Point]:
    """Points P over K with x(ell*P) equal to x_target or its conjugate."""
    num, den = _multiplication_x(c, ell)
    if isinstance(x_target, QuadElem) and x_target.v != 0:
        # norm down to Q; conjugate preimages are torsion points too
        u, v = x_target.u, x_target.v
        shifted = num - den * u
        poly = shifted * shifted - den * den * (K.d * v * v)
    else:
        poly = num - den * (x_target.u if isinstance(x_target, QuadElem) else x_target)
    return {p for x in roots_in_quadratic_field(poly, K) for p in _lift_x(c, x)}


def _primary_part(c: Curve, K: QuadField, ell: int, bound: int, cap: int) -> set[Point]:
    """Points of ell-power order, found by repeatedly dividing by ell."""
    frontier = _prime_order_points(c, K, ell)
    found = set(frontier)
    power = ell
    while frontier and bound % (power * ell) == 0 and power * ell <= cap:
        targets = {p.x for p in frontier}
        frontier = set()
        for x_target in sorted(targets, key=lambda t: point_key(Point(t, t))):
            frontier |= _division_preimages(c, K, x_target, ell) - found
        found |= frontier
        power *= ell
    return found


def _closure(c: Curve, seeds: set[Point]) -> set[Point]:
    group = {INFINITY}
    queue = deque(sorted(seeds, key=point_key))
    while queue:
        p = queue.popleft()
        if p in group:
            continue
        for q in list(group):
            s = _add(c, p, q)
            if s not in group:
                queue.append(s)
        group.add(p)
        if len(group) > CLOSURE_CAP:
            raise InternalInconsistency("torsion closure exceeded 25 points")
    return group


def torsion_subgroup(c: Curve, K: QuadField) -> TorsionGroup:
    """E(K)_tors as Z/n1 + Z/n2 with generators and the full list of points.

    The search runs on the integral model, where every division polynomial
    has a small leading coefficient, and the points are mapped back.
    """
    _require_short(c)
    validate(c)
    u = integral_scale(c)
    if u == 1:
        return _torsion_subgroup(c, K)
    scale = WIso(Fraction(1, u))
    back = scale.inverse()
    g = _torsion_subgroup(scale.map_curve(c), K)
    pts = tuple(sorted((back.map_point(p) for p in g.points), key=point_key))
    gens = tuple(back.map_point(p) for p in g.generators)
    return TorsionGroup(g.n1, g.n2, gens, pts)


def _torsion_subgroup(c: Curve, K: QuadField) -> TorsionGroup:
    bound = _reduction_gcd(c, K)
    seeds: set[Point] = set()
    for ell, cap in PRIME_POWER_CAPS:
        if bound % ell == 0:
            seeds |= _primary_part(c, K, ell, bound, cap)
    group = _closure(c, seeds)
    for p in group:
        if not c.contains(p):
            raise InternalInconsistency(f"closure produced {p} off the curve")
    orders = {p: _order(c, p, MAX_GROUP_ORDER) for p in group}
    if None in orders.values():
        raise InternalInconsistency("non-torsion point in the torsion closure")
    n2 = max(orders.values())
    n1, rem = divmod(len(group), n2)
    if rem or n2 % n1:
        raise InternalInconsistency(f"|T| = {len(group)} with exponent {n2} is not Z/n1 x Z/n2")
    killed = sum(1 for o in orders.values() if n1 % o == 0)
    if killed != n1 * n1:
        raise InternalInconsistency(f"{killed} points killed by {n1}, expected {n1 * n1}")
    if (n1, n2) not in KKM_GROUPS:
        raise InternalInconsistency(f"computed {group_label(n1, n2)} is not an admissible group")
    if bound % len(group):
        raise InternalInconsistency(f"|T| = {len(group)} does not divide the reduction bound {bound}")
    pts = tuple(sorted(group, key=point_key))
    gens = _generators(c, pts, orders, n1, n2)
    return TorsionGroup(n1, n2, gens, pts)


def _generators(c, pts, orders, n1, n2) -> tuple[Point, ...]:
    if n2 == 1:
        return ()
    g2 = next(p for p in pts if orders[p] == n2)
    if n1 == 1:
        return (g2,)
    cyclic = {_mul(c, k, g2) for k in range(n2)}
    for p in pts:
        if orders[p] == n1 and all(_mul(c, k, p) not in cyclic for k in range(1, n1)):
            return (p, g2)
    raise InternalInconsistency("no complementary generator found")


# -- the y^2 = x^3 + a family with square a ---------------------------------


@dataclass(frozen=True)
class Shortlist:
    case: str  # "sixth-power" or "square-not-sixth"
    eisenstein: bool  # K = Q(sqrt(-3))
    admissible: frozenset

    def __contains__(self, g) -> bool:
        shape = g.shape if isinstance(g, TorsionGroup) else tuple(g)
        return shape in self.admissible

    def labels(self) -> list[str]:
        return [group_label(*s) for s in sorted(self.admissible)]


def classify_family(a: int, K: QuadField) -> Shortlist:
    """Admissible torsion of y^2 = x^3 + a over K for a nonzero square integer a."""
    if isinstance(a, Fraction):
        if a.denominator != 1:
            raise UnsupportedCase("a must be an integer")
        a = a.numerator
    if a == 0:
        raise UnsupportedCase("a = 0 gives the singular curve y^2 = x^3")
    if a < 0 or math.isqrt(a) ** 2 != a:
        raise UnsupportedCase(f"a = {a} is not a perfect square")
    eis = K.d == -3
    if integer_nthroot(a, 6)[1]:
        admissible = {(2, 6)} if eis else {(1, 6), (1, 12), (1, 18)}
        return Shortlist("sixth-power", eis, frozenset(admissible))
    admissible = {(1, 3), (1, 9), (3, 3)} if eis else {(1, 3), (1, 9)}
    return Shortlist("square-not-sixth", eis, frozenset(admissible))
