import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from quadtors.arith import QuadElem, QuadField

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("default")

FIELD_SEEDS = [-15, -11, -7, -6, -5, -3, -2, -1, 2, 3, 5, 6, 7, 10, 13]


@pytest.fixture(scope="session")
def derived():
    return json.loads((Path(__file__).parent / "oracle" / "derived.json").read_text())


def rationals(max_num=50, max_den=12):
    return st.builds(
        Fraction, st.integers(-max_num, max_num), st.integers(1, max_den)
    )


fields = st.sampled_from(FIELD_SEEDS).map(QuadField)


@st.composite
def elements(draw, field=None, nonzero=False):
    K = field or draw(fields)
    u, v = draw(rationals()), draw(rationals())
    if nonzero and u == 0 and v == 0:
        u = Fraction(1)
    return QuadElem(u, v, K)


def structure_violations(c, K, g) -> list[str]:
    """Every structural property a computed torsion group must have; empty when sound."""
    from quadtors.curve import INFINITY, _add, _mul, point_order
    from quadtors.torsion import kkm_member, reduction_counts

    bad = []
    pts = set(g.points)
    if g.n2 % g.n1:
        bad.append("n1 does not divide n2")
    if len(pts) != g.n1 * g.n2:
        bad.append(f"|T| = {len(pts)} but n1*n2 = {g.n1 * g.n2}")
    if INFINITY not in pts:
        bad.append("identity missing")
    for p in pts:
        if not c.contains(p):
            bad.append(f"{p} off the curve")
        for q in pts:
            if _add(c, p, q) not in pts:
                bad.append(f"{p} + {q} escapes T")
                break
    if any(point_order(c, p) is None or g.n2 % point_order(c, p) for p in pts):
        bad.append("a point order does not divide n2")
    killed = sum(1 for p in pts if _mul(c, g.n1, p) == INFINITY)
    if killed != g.n1 * g.n1:
        bad.append(f"{killed} points killed by n1, expected {g.n1 ** 2}")
    if not kkm_member(g):
        bad.append(f"{g.label} not admissible")
    if g.n1 == 3 and K.d != -3:
        bad.append("n1 = 3 outside Q(sqrt(-3))")
    if g.n1 == 4 and K.d != -1:
        bad.append("n1 = 4 outside Q(sqrt(-1))")
    orders = sorted(point_order(c, p) for p in g.generators)
    want = sorted(o for o in (g.n1, g.n2) if o > 1)
    if orders != want:
        bad.append(f"generator orders {orders}, expected {want}")
    for p, _, n in reduction_counts(c, K):
        if n % len(pts):
            bad.append(f"|T| does not divide #E mod {p}")
    return bad


ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[n] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
