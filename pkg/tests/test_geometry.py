import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from stablegon.geometry import (DirectedSegment, Order, RatPoint, RatVec, Side, arg_key, as_fraction,
                                cmp_arg, cmp_points, format_fraction, is_positively_convex,
                                point_in_convex, rotate_point, side_of, upward)

P = RatPoint


def test_cmp_points():
    assert cmp_points(P(0, -1), P(-1, 0)) == Order.Less
    assert cmp_points(P(-1, 0), P(1, 0)) == Order.Less
    assert cmp_points(P(3, 4), P(3, 4)) == Order.Equal


def test_cmp_arg_examples():
    assert cmp_arg(RatVec(1, 0), RatVec(0, 1)) == Order.Less
    assert cmp_arg(RatVec(-1, 1), RatVec(1, 1)) == Order.Greater
    assert cmp_arg(RatVec(2, 3), RatVec(4, 6)) == Order.Equal
    with pytest.raises(ValueError):
        cmp_arg(RatVec(0, 0), RatVec(1, 0))


def test_upward():
    s = DirectedSegment(P(0, 0), P(1, 1))
    assert upward(s) == s
    assert upward(DirectedSegment(P(0, 0), P(-1, -1))) == DirectedSegment(P(-1, -1), P(0, 0))
    r = upward(DirectedSegment(P(1, 0), P(0, 0)))
    assert r == DirectedSegment(P(0, 0), P(1, 0))
    assert arg_key(r.vec) == arg_key(RatVec(1, 0))


def test_side_of():
    a, b = P(0, 0), P(1, 0)
    assert side_of(a, b, P(0, 1)) == Side.Left
    assert side_of(a, b, P(0, -1)) == Side.Right
    assert side_of(a, b, P(2, 0)) == Side.On


SQUARE = [P(0, 0), P(1, 0), P(1, 1), P(0, 1)]


def test_convexity():
    assert is_positively_convex(SQUARE)
    assert not is_positively_convex(SQUARE[::-1])
    assert not is_positively_convex([P(0, 0), P(Fraction(1, 2), 0)] + SQUARE[1:])


def test_point_in_convex():
    h = Fraction(1, 2)
    assert point_in_convex(P(h, h), SQUARE)
    assert not point_in_convex(P(h, 0), SQUARE, strict=True)
    assert point_in_convex(P(h, 0), SQUARE, strict=False)
    assert not point_in_convex(P(2, h), SQUARE)


def test_floats_refused():
    with pytest.raises(TypeError):
        as_fraction(0.5)
    assert format_fraction(Fraction(6, 4)) == "3/2"
    assert format_fraction(Fraction(-4, 2)) == "-2"


small = st.fractions(min_value=-50, max_value=50, max_denominator=40)
vec = st.tuples(small, small).filter(lambda v: v != (0, 0)).map(lambda v: RatVec(*v))


def _angle(v):
    return math.atan2(float(v.dy), float(v.dx)) % (2 * math.pi)


@given(vec, vec)
def test_cmp_arg_matches_atan2(u, v):
    # float oracle; skip near-ties where rounding decides
    a, b = _angle(u), _angle(v)
    c = cmp_arg(u, v)
    if abs(a - b) > 1e-9 and abs(abs(a - b) - 2 * math.pi) > 1e-9:
        assert c == (Order.Less if a < b else Order.Greater)
    assert (c == Order.Equal) == (u.cross(v) == 0 and u.dot(v) > 0)


@given(vec, vec)
def test_arg_key_agrees_with_cmp_arg(u, v):
    ku, kv = arg_key(u), arg_key(v)
    expect = Order.Less if ku < kv else (Order.Equal if ku == kv else Order.Greater)
    assert cmp_arg(u, v) == expect


@given(st.fractions(min_value=-20, max_value=20, max_denominator=30), small, small)
def test_rotation_is_exact_isometry(t, x, y):
    p = rotate_point(P(x, y), t)
    assert p.x * p.x + p.y * p.y == x * x + y * y
