"""Solvability of one-parameter coefficient systems ``f_i(t) = r_i``.

Each equation is cleared to a polynomial; the system has a solution in a
field exactly when the gcd of those polynomials has a root there that is
not a pole of any left-hand side.
"""
from __future__ import annotations

import ast
import hashlib
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from importlib import resources
from pathlib import Path
from typing import Iterable, Union

from .arith import QuadField, as_rat, format_rat, parse_rat
from .errors import InputError
from .poly import QPoly, field_of_quadratic, poly_gcd, quadratic_factors, rational_roots, roots_in_quadratic_field

FIXTURE_NAME = "z12_comparison.txt"


@dataclass(frozen=True)
class RatFunc:
    """num/den in lowest terms with a monic denominator."""

    num: QPoly
    den: QPoly = QPoly((1,))

    def __post_init__(self):
        if self.den.is_zero():
            raise InputError("rational function with zero denominator")
        num, den = self.num, self.den
        if not num.is_zero():
            g = poly_gcd(num, den)
            num, den = num // g, den // g
        else:
            den = QPoly((1,))
        lead = den.lead
        object.__setattr__(self, "num", num * (1 / lead))
        object.__setattr__(self, "den", den * (1 / lead))

    def __call__(self, t):
        den = self.den(t)
        if den == 0:
            raise ZeroDivisionError("evaluation at a pole")
        return self.num(t) / den

    def __str__(self):
        if self.den.degree == 0:
            return self.num.to_str("t")
        return f"({self.num.to_str('t')}) / ({self.den.to_str('t')})"


@dataclass(frozen=True)
class Equation:
    lhs: RatFunc
    rhs: Fraction

    def __post_init__(self):
        object.__setattr__(self, "rhs", as_rat(self.rhs))

    def __str__(self):
        return f"{self.lhs} = {format_rat(self.rhs)}"


@dataclass(frozen=True)
class ParamSystem:
    equations: tuple[Equation, ...]

    def __post_init__(self):
        object.__setattr__(self, "equations", tuple(self.equations))
        if not self.equations:
            raise InputError("a parameter system needs at least one equation")


_LINE = re.compile(r"^\s*(\[[^\]]*\])\s*/\s*(\[[^\]]*\])\s*=\s*(\S+)\s*$")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        values = ast.literal_eval(text)
    except (ValueError, SyntaxError):
        raise InputError(f"malformed coefficient list {text!r}") from None
    if not isinstance(values, list) or not all(isinstance(v, int) for v in values):
        raise InputError(f"coefficients must be integers: {text!r}")
    return tuple(values)


def parse_fixture(text: str) -> ParamSystem:
    """Parse lines ``[n0, n1, ...] / [d0, d1, ...] = P/Q``; ``#`` starts a comment."""
    equations = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if m is None:
            raise InputError(f"line {lineno}: expected 'NUM / DEN = P/Q'")
        num, den = QPoly(_int_list(m.group(1))), QPoly(_int_list(m.group(2)))
        equations.append(Equation(RatFunc(num, den), parse_rat(m.group(3))))
    return ParamSystem(tuple(equations))


def bundled_fixture() -> Path:
    return Path(str(resources.files("quadtors") / "data" / FIXTURE_NAME))


def load_fixture(path: Union[str, Path, None] = None) -> ParamSystem:
    path = bundled_fixture() if path is None else Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read fixture {path}: {exc.strerror}") from None
    return parse_fixture(text)


def fixture_sha256(path: Union[str, Path, None] = None) -> str:
    path = bundled_fixture() if path is None else Path(path)
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _primitive(p: QPoly) -> QPoly:
    if p.is_zero():
        return p
    return QPoly(p.primitive()[1])


def clear_denominators(system: ParamSystem) -> list[QPoly]:
    """``num - rhs*den`` per equation, as a primitive integer polynomial."""
    return [_primitive(eq.lhs.num - eq.lhs.den * eq.rhs) for eq in system.equations]


@dataclass(frozen=True)
class Verdict:
    gcd: QPoly
    rational_roots: frozenset
    field_roots: dict = field(default_factory=dict)  # d -> frozenset of QuadElem
    quadratic_fields: frozenset = frozenset()  # d with a root, when every field was searched
    all_quadratic: bool = False

    @property
    def solvable(self) -> bool:
        if self.gcd.is_zero():
            return True
        if self.rational_roots:
            return True
        if any(self.field_roots.values()):
            return True
        return bool(self.quadratic_fields)

    @property
    def label(self) -> str:
        return "CONSISTENT" if self.solvable else "INCONSISTENT"


def _not_pole(system: ParamSystem, t) -> bool:
    return all(eq.lhs.den(t) != 0 for eq in system.equations)


def consistency(
    system: ParamSystem,
    fields: Iterable[QuadField] = (),
    all_quadratic: bool = False,
) -> Verdict:
    """Decide solvability over Q, over each field in ``fields``, and optionally
    over every quadratic field at once."""
    polys = [p for p in clear_denominators(system) if not p.is_zero()]
    if not polys:
        return Verdict(QPoly(()), frozenset(), {}, frozenset(), all_quadratic)
    g = reduce(poly_gcd, polys, QPoly(()))
    gcd = _primitive(g)
    if gcd.degree < 1:
        return Verdict(gcd, frozenset(), {K.d: frozenset() for K in fields}, frozenset(), all_quadratic)
    rats = frozenset(r for r in rational_roots(gcd) if _not_pole(system, r))
    per_field = {}
    for K in fields:
        per_field[K.d] = frozenset(
            z for z in roots_in_quadratic_field(gcd, K) if _not_pole(system, z)
        )
    found = set()
    if all_quadratic:
        for s, t in quadratic_factors(gcd).quadratic_factors:
            d = field_of_quadratic(s, t)
            roots = roots_in_quadratic_field(QPoly((t, -s, 1)), QuadField(d))
            if any(_not_pole(system, z) for z in roots):
                found.add(d)
    return Verdict(gcd, rats, per_field, frozenset(found), all_quadratic)


def verdict_dict(v: Verdict) -> dict:
    return {
        "verdict": v.label,
        "gcd": v.gcd.to_str("t") if not v.gcd.is_zero() else "0",
        "gcd_degree": v.gcd.degree,
        "rational_roots": sorted(format_rat(r) for r in v.rational_roots),
        "field_roots": {str(d): sorted(str(z) for z in zs) for d, zs in sorted(v.field_roots.items())},
        "quadratic_fields": sorted(v.quadratic_fields) if v.all_quadratic else None,
    }
