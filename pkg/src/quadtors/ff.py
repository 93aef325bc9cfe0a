"""Small finite fields F_p and F_{p^2} for point counting."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import isprime


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@lru_cache(maxsize=None)
def non_residue(p: int) -> int:
    for n in range(2, p):
        if legendre(n, p) == -1:
            return n
    raise ValueError(f"no quadratic non-residue mod {p}")


def reduce_mod(r: Fraction, p: int) -> int:
    r = Fraction(r)
    if r.denominator % p == 0:
        raise ZeroDivisionError(f"{r} is not {p}-integral")
    return r.numerator * pow(r.denominator, -1, p) % p


@dataclass(frozen=True)
class FFElem:
    """``u + v*sqrt(n)`` in F_p[sqrt(n)] with ``n`` the least non-residue mod p.

    Elements with ``v = 0`` are the prime field F_p.
    """

    u: int
    v: int
    p: int

    @property
    def nr(self) -> int:
        return non_residue(self.p)

    def __add__(self, o: "FFElem") -> "FFElem":
        return FFElem((self.u + o.u) % self.p, (self.v + o.v) % self.p, self.p)

    def __mul__(self, o: "FFElem") -> "FFElem":
        p = self.p
        return FFElem(
            (self.u * o.u + self.nr * self.v * o.v) % p,
            (self.u * o.v + self.v * o.u) % p,
            p,
        )

    def norm(self) -> int:
        return (self.u * self.u - self.nr * self.v * self.v) % self.p

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def chi(self) -> int:
        """Quadratic character of F_{p^2}: 0 at zero, 1 on nonzero squares, -1 otherwise."""
        if self.is_zero():
            return 0
        # z is a square in F_{p^2} iff its norm z^(p+1) is a square in F_p
        return legendre(self.norm(), self.p)


def count_fp(b: int, a: int, p: int) -> int:
    chi = [0] + [-1] * (p - 1)
    for x in range(1, p):
        chi[x * x % p] = 1
    return 1 + sum(1 + chi[(x * x * x + b * x + a) % p] for x in range(p))


def count_fp2(b: int, a: int, p: int) -> int:
    total = 1
    B = FFElem(b % p, 0, p)
    A = FFElem(a % p, 0, p)
    for u in range(p):
        for v in range(p):
            x = FFElem(u, v, p)
            total += 1 + (x * x * x + B * x + A).chi()
    return total


def split_prime_power(q: int) -> tuple[int, int]:
    if isprime(q):
        return q, 1
    from math import isqrt

    r = isqrt(q)
    if r * r == q and isprime(r):
        return r, 2
    raise ValueError(f"{q} is neither a prime nor the square of a prime")
