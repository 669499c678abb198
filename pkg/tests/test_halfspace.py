import random
from fractions import Fraction

import pytest

import engines.halfspace as halfspace
from engines.halfspace import (
    Horoball,
    d_f_constant,
    e_constant,
    effective_ratio,
    excluded_arc,
    halfspace_geometric_arc,
    parabolic_trace,
    parabolic_trace_by_matrices,
    tangent_horoball_scale,
)
from utils.errors import BadParameter, EqualSlopes, PostconditionError
from utils.slopes import INFINITY, ZERO, BoundaryPoint, boundary_compare, cusp_of_slope, intersection_number, make_slope

ONE = make_slope(1, 1)


def _random_slope(rng: random.Random, bound: int = 20):
    while True:
        p, q = rng.randint(-bound, bound), rng.randint(0, bound)
        if (p, q) != (0, 0):
            return make_slope(p, q)


def _random_pair(rng: random.Random):
    s = _random_slope(rng)
    while True:
        t = _random_slope(rng)
        if t != s:
            return s, t


def test_horoball_geometry():
    ball = Horoball(make_slope(2, 1), Fraction(1, 2))
    assert ball.diameter == Fraction(1, 2)
    assert ball.tangency == BoundaryPoint.rational(Fraction(-1, 2))
    assert Horoball(ZERO, 1).diameter is None
    assert Horoball(ZERO, 1).is_tangent_to(Horoball(INFINITY, 1))
    assert not Horoball(ZERO, 1).is_tangent_to(Horoball(INFINITY, 2))


def test_tangent_horoball_scale():
    assert tangent_horoball_scale(ZERO, INFINITY, 1) == 1
    assert tangent_horoball_scale(make_slope(1, 2), make_slope(2, 1), Fraction(1, 3)) == Fraction(1, 3)
    with pytest.raises(EqualSlopes):
        tangent_horoball_scale(ONE, ONE, 1)
    with pytest.raises(BadParameter):
        tangent_horoball_scale(ZERO, ONE, 0)


def test_tangent_scale_gives_tangent_horoballs():
    rng = random.Random(7)
    for _ in range(1000):
        s, t = _random_pair(rng)
        m = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        m_prime = tangent_horoball_scale(s, t, m)
        assert m * m_prime * intersection_number(s, t) ** 2 == 1
        assert tangent_horoball_scale(t, s, m_prime) == m
        assert Horoball(s, m).is_tangent_to(Horoball(t, m_prime))


def test_parabolic_trace_examples():
    assert parabolic_trace(1, INFINITY, 1, ZERO) == 3
    assert parabolic_trace(1, INFINITY, -1, ZERO) == 1
    assert parabolic_trace(2, ONE, 3, ONE) == 2


def test_parabolic_trace_matches_matrices():
    rng = random.Random(11)
    for _ in range(1000):
        s1, s2 = _random_slope(rng), _random_slope(rng)
        n1, n2 = rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([-3, -2, -1, 1, 2, 3])
        assert parabolic_trace(n1, s1, n2, s2) == parabolic_trace_by_matrices(n1, s1, n2, s2)


def test_constants():
    assert [d_f_constant(n) for n in (1, 4, 5)] == [2, 24, 120]
    assert [e_constant(n) for n in (1, 4, 5, 6, 8, 9, 12)] == [1, 2, 5, 3, 4, 3, 4]
    with pytest.raises(BadParameter):
        d_f_constant(0)
    with pytest.raises(BadParameter):
        e_constant(0)


def test_effective_ratio():
    assert effective_ratio("Obstruction", rho=Fraction(2, 3)) == Fraction(2, 3)
    assert effective_ratio("GeneralFixed", rho=2, rho0=Fraction(1, 4)) == Fraction(1, 2)
    assert effective_ratio("FixedPoint", deg=3) == Fraction(1, 9)
    assert effective_ratio("NetObstruction", d=4, e=2) == Fraction(1, 4)
    assert effective_ratio("NetFixedPoint", d=5) == Fraction(1, 25)
    with pytest.raises(BadParameter):
        effective_ratio("FixedPoint")
    with pytest.raises(BadParameter):
        effective_ratio("Repelling", rho=1)


def test_model_arc():
    arc = excluded_arc("Obstruction", INFINITY, ZERO, rho=1)
    assert (arc.start, arc.end) == (BoundaryPoint.rational(-1), BoundaryPoint.rational(1))
    assert not arc.wraps
    assert arc.contains(BoundaryPoint.rational(0))
    assert not arc.contains(BoundaryPoint.rational(1))
    assert arc.closure_contains(BoundaryPoint.rational(1))


def test_fixed_point_arc():
    arc = excluded_arc("FixedPoint", INFINITY, ZERO, deg=2)
    assert (arc.start, arc.end) == (BoundaryPoint.rational(Fraction(-1, 2)), BoundaryPoint.rational(Fraction(1, 2)))


def test_arc_through_infinity():
    arc = excluded_arc("Obstruction", ZERO, INFINITY, rho=Fraction(1, 4))
    assert (arc.start, arc.end) == (BoundaryPoint.rational(2), BoundaryPoint.rational(-2))
    assert arc.wraps
    assert arc.contains(BoundaryPoint.infinity())
    assert not arc.contains(BoundaryPoint.rational(0))


def test_linear_arc():
    arc = excluded_arc("Obstruction", ONE, INFINITY, rho=1)
    assert arc.a == 0
    assert arc.start.infinite
    assert arc.end == BoundaryPoint.rational(Fraction(-1, 2))
    assert arc.contains(BoundaryPoint.rational(-1))
    assert not arc.contains(BoundaryPoint.rational(0))


def test_irrational_endpoints():
    arc = excluded_arc("Obstruction", INFINITY, ZERO, rho=2)
    assert arc.start == BoundaryPoint.surd(0, -1, 2)
    assert arc.end == BoundaryPoint.surd(0, 1, 2)
    assert arc.value_sign(arc.start) == 0


def test_empty_arcs():
    assert excluded_arc("NetObstruction", ONE, ONE, d=3, e=3) is None
    assert excluded_arc("Obstruction", ONE, ONE, rho=Fraction(1, 2)) is None


def test_arc_contains_probe_cusp():
    rng = random.Random(3)
    for _ in range(300):
        s, t = _random_pair(rng)
        rho = Fraction(rng.randint(1, 12), rng.randint(1, 12))
        arc = excluded_arc("Obstruction", s, t, rho=rho)
        assert arc.contains(cusp_of_slope(s))
        assert not arc.closure_contains(cusp_of_slope(t))
        for end in (arc.start, arc.end):
            if not end.infinite:
                assert arc.value_sign(end) == 0


def test_geometric_arc_agrees():
    rng = random.Random(5)
    for _ in range(100):
        s, t = _random_pair(rng)
        rho = Fraction(rng.randint(1, 12), rng.randint(1, 12))
        algebraic = excluded_arc("Obstruction", s, t, rho=rho)
        geometric = halfspace_geometric_arc(s, t, rho)
        ends = sorted([algebraic.start, algebraic.end])
        other = sorted([geometric.start, geometric.end])
        assert all(boundary_compare(x, y) == 0 for x, y in zip(ends, other))


def test_geometric_arc_rejects_equal_slopes():
    with pytest.raises(EqualSlopes):
        halfspace_geometric_arc(ONE, ONE, 1)


def test_geometric_arc_endpoints_are_roots():
    rng = random.Random(9)
    for _ in range(50):
        s, t = _random_pair(rng)
        rho = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        arc = halfspace_geometric_arc(s, t, rho)
        assert arc.b * arc.b - 4 * arc.a * arc.c == 4 * rho * intersection_number(s, t) ** 2
        assert arc.value_sign(arc.start) == 0
        assert arc.value_sign(arc.end) == 0


def test_geometric_arc_checks_the_quadratic(monkeypatch):
    original = halfspace._quadratic
    monkeypatch.setattr(halfspace, "_quadratic", lambda s, t, r: (1, 0, 1))
    with pytest.raises(PostconditionError):
        halfspace_geometric_arc(ONE, ZERO, 2)

    def shifted(s, t, r):
        a, b, c = original(s, t, r)
        return a, b + 2 * a, a + b + c

    monkeypatch.setattr(halfspace, "_quadratic", shifted)
    with pytest.raises(PostconditionError):
        halfspace_geometric_arc(ONE, ZERO, 2)
