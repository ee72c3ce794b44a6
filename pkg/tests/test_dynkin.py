import pytest

from stablegon.dynkin import (DynkinQuiver, DynkinType, all_orientations, canonical_edges, cartan_matrix,
                              coxeter_number, euler_form, lambda_form, lambda_matrix, leaves,
                              positive_roots)

T = DynkinType.parse


def tits_roots(t):
    """Positive roots as the vectors with Tits form 1, grown one simple at a time."""
    n = t.rank
    edges = canonical_edges(t)

    def form(v):
        return sum(x * x for x in v) - sum(v[a - 1] * v[b - 1] for a, b in edges)

    layer = {tuple(1 if j == i else 0 for j in range(n)) for i in range(n)}
    out = set(layer)
    while layer:
        nxt = set()
        for v in layer:
            for i in range(n):
                w = v[:i] + (v[i] + 1,) + v[i + 1:]
                if form(w) == 1 and w not in out:
                    nxt.add(w)
        out |= nxt
        layer = nxt
    return out


def test_coxeter_numbers():
    assert coxeter_number(T("A5")) == 6
    assert coxeter_number(T("D6")) == 10
    assert coxeter_number(T("E8")) == 30


def test_positive_roots_small():
    assert positive_roots(T("A2")) == {(1, 0), (0, 1), (1, 1)}
    assert len(positive_roots(T("A5"))) == 15
    assert len(positive_roots(T("E8"))) == 120


@pytest.mark.parametrize("name", ["A1", "A4", "A7", "D4", "D5", "D8", "E6", "E7", "E8"])
def test_roots_against_tits_form(name):
    t = T(name)
    roots = positive_roots(t)
    assert roots == tits_roots(t)
    assert len(roots) == t.rank * coxeter_number(t) // 2


def test_euler_and_lambda():
    q = DynkinQuiver.from_signs("A2", "+")
    assert euler_form(q, (1, 0), (0, 1)) == -1
    assert euler_form(q, (0, 1), (1, 0)) == 0
    assert lambda_form(q, 1, 2) == 1
    for q in all_orientations(T("A3")):
        assert lambda_form(q, 1, 3) == 0
        for i in (1, 2, 3):
            assert lambda_form(q, i, i) == 0
            e = tuple(1 if k == i else 0 for k in (1, 2, 3))
            assert euler_form(q, e, e) == 1
    q = DynkinQuiver.from_signs("D5", "+-+-")
    lam = lambda_matrix(q)
    assert all(lam[i][j] == -lam[j][i] for i in range(5) for j in range(5))


def test_symmetrized_euler_is_cartan():
    for q in all_orientations(T("E6")):
        c = cartan_matrix(q.dtype)
        for i in range(6):
            for j in range(6):
                ei = tuple(1 if k == i else 0 for k in range(6))
                ej = tuple(1 if k == j else 0 for k in range(6))
                assert euler_form(q, ei, ej) + euler_form(q, ej, ei) == c[i][j]


def test_quiver_roundtrip_and_reflection():
    q = DynkinQuiver.from_signs("E8", "+-+-+--")
    assert DynkinQuiver.from_json(q.to_json()) == q
    assert DynkinQuiver.from_arrows(q.dtype, q.arrows()) == q
    assert q.opposite().opposite() == q
    for k in q.sinks():
        assert k in q.reflect(k).sources()
    assert leaves(T("E8")) == (1, 3, 8)
    assert len(list(all_orientations(T("E7")))) == 64


def test_invalid_inputs():
    with pytest.raises(ValueError):
        DynkinType("E", 9)
    with pytest.raises(ValueError):
        DynkinType("D", 3)
    with pytest.raises(ValueError):
        DynkinQuiver.from_signs("A3", "+")
    with pytest.raises(ValueError):
        DynkinQuiver.from_signs("A3", "+x")
    with pytest.raises(ValueError):
        DynkinQuiver.from_arrows(T("A3"), {(1, 2)})
