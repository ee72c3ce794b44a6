from fractions import Fraction
import random

import pytest

from stablegon.diagonals import (DegenerateInput, analyze, central_charge, decompose,
                                 essential_intersections, intersection_quiver, simples,
                                 stability_function, type_model, upward_diagonals)
from stablegon.dynkin import DynkinQuiver, DynkinType, canonical_edges, positive_roots
from stablegon.geometry import RatPoint, RatVec, is_upward, point_key
from stablegon.polygon import StablePolygon
from stablegon.realize import realize

from conftest import fixture_polygons

P = RatPoint
TRI = StablePolygon("A2", [P(0, -1), P(0, 1), P(-1, 0)])


def test_a2_triangle():
    ups = upward_diagonals(TRI)
    assert [c.vec for c in ups] == [RatVec(-1, 1), RatVec(0, 2), RatVec(1, 1)]
    S = simples(TRI)
    assert S.vec(1) == RatVec(-1, 1) and S.vec(2) == RatVec(1, 1)
    assert decompose(ups[1], S) == (1, 1)
    assert essential_intersections(S) == {(1, 2, 1)}
    Z, rows = stability_function(TRI)
    assert [d for _, d in rows] == [(1, 0), (1, 1), (0, 1)]
    assert central_charge(ups[1]) == RatVec(0, 2)


def test_a5_hexagon(a5_hexagon):
    S = simples(a5_hexagon)
    want = {1: (2, 0), 2: (2, 3), 3: (-7, 2), 4: (Fraction(15, 2), 2), 5: (Fraction(-9, 2), 3)}
    assert {i: (S.vec(i).dx, S.vec(i).dy) for i in S.classes} == want
    a = analyze(a5_hexagon)
    y1, y4 = S.locator["Y"][0], S.locator["Y"][3]
    cls = a.class_of(y1, y4)
    assert cls.vec == RatVec(-3, 5)
    assert decompose(cls, S) == (1, 1, 1, 0, 0)
    iq = intersection_quiver(a5_hexagon)
    assert iq.arrow_set() == {(2, 1), (3, 2), (3, 4), (5, 4)}
    assert all(x.grade == 1 for x in iq.arrows)


def test_d5_octagon_orientation():
    q = DynkinQuiver.from_arrows(DynkinType("D", 5), {(2, 1), (2, 3), (4, 3), (5, 3)})
    p = realize(q)
    assert intersection_quiver(p).arrow_set() == {(2, 1), (2, 3), (4, 3), (5, 3)}


def test_counts():
    for name in ("A5", "D4", "D5", "D7"):
        t = DynkinType.parse(name)
        p = realize(DynkinQuiver(t, ("+",) * (t.rank - 1)))
        assert len(upward_diagonals(p)) == t.rank * t.h // 2
    for n in (6, 7, 8):
        _, p = fixture_polygons(n)[0]
        assert len(upward_diagonals(p)) == n * p.h // 2


def test_d_class_count_formula():
    for n in range(4, 9):
        assert len(type_model(DynkinType("D", n)).class_rep) == n * (n - 1)


def test_d_case_b1():
    # case (a) construction puts both punctures at the centre, Y_{+-1} = O
    q = DynkinQuiver.from_signs("D5", "++++")
    p = realize(q)
    a = analyze(p)
    S = a.simples
    assert S.locator["case"] == "B=Y1"
    assert S.members[5] == (a.Yd(-2), ("B", "+"))


def test_e_quiver_shape():
    for n in (6, 7, 8):
        for q, p in fixture_polygons(n)[:3]:
            iq = intersection_quiver(p)
            und = {frozenset((a.source, a.target)) for a in iq.arrows}
            assert und == {frozenset(e) for e in canonical_edges(q.dtype)}
            assert frozenset((3, 4)) in und


@pytest.mark.parametrize("n", [6, 7, 8])
def test_dimvectors_are_roots_and_additive(n):
    for q, p in fixture_polygons(n)[:3]:
        Z, rows = stability_function(p)
        dims = [d for _, d in rows]
        assert len(dims) == len(set(dims))
        assert set(dims) == positive_roots(q.dtype)
        for cls, d in rows:
            assert is_upward(cls.vec)
            assert Z.charge(d) == cls.vec
        a = analyze(p)
        # independent route: solve for the K-class from the linear forms
        for cls, d in rows[::7]:
            assert a.dimvector_symbolic(cls) == d
        # the other split order gives the same K-class
        rev = lambda splits: list(reversed(splits))
        for cls, d in rows[::5]:
            assert a.dimvector_with(cls, rev) == d
        assert a.split_consistency() > 0


def test_a_decomposition_random():
    rng = random.Random(7)
    checked = 0
    while checked < 200:
        n = rng.randint(2, 8)
        xs = sorted(rng.sample(range(-60, 60), n + 1))
        # upper arc of a downward parabola, listed right to left: counter-clockwise
        pts = [P(x, Fraction(-x * x, 50)) for x in reversed(xs)]
        p = StablePolygon(DynkinType("A", n), pts)
        S = simples(p)
        order = sorted(p.vertices, key=point_key)
        for cls in upward_diagonals(p):
            i, j = order.index(cls.tail), order.index(cls.head)
            want = tuple(1 if i <= k < j else 0 for k in range(n))
            assert decompose(cls, S) == want
            tot = RatVec(0, 0)
            for k in range(i, j):
                tot = tot + S.vec(k + 1)
            assert tot == cls.vec
            checked += 1


def test_misplaced_punctures_rejected():
    # punctures outside the Y_{+-1}/Y_{+-2} slots of the height order
    hexagon = [P(2, 0), P(1, 1), P(-1, 1), P(-2, 0), P(-1, -1), P(1, -1)]
    p = StablePolygon("D4", hexagon, (P(0, -2), P(0, 2)))
    with pytest.raises(DegenerateInput):
        simples(p)
