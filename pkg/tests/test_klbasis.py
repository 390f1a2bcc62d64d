import json
import random

import pytest

from klcells import kernel
from klcells.coxeter import get_group, iter_bits
from klcells.hecke import HeckeElement, bar
from klcells.klbasis import (
    KLTable,
    TruncationError,
    compute_C,
    h_full,
    kl_table,
    mu_recursion_table,
    structure_constant_left,
    structure_constant_right,
)
from klcells.laurent import ONE, mono
from klcells.weights import WeightFunction

CASES = [("g2", (3, 1), 9), ("g2", (2, 3), 8), ("b2", (6, 4, 3), 8), ("i2(6)", (2, 1), 6), ("a1", (3, 1), 10)]


def W(group, params):
    return WeightFunction.from_params(group, params)


def test_small_basis_elements():
    L = W("g2", (3, 1))
    A = kl_table(L, 6).algebra
    assert compute_C(L, 0) == A.one()
    for s, Ls in [(0, 3), (1, 1)]:
        w = A.group.rmul(0, s)
        assert compute_C(L, w) == A.T(w) + A.T(0, mono(-Ls))


def test_longest_parabolic_closed_form():
    L = W("g2", (3, 2))
    g = L.group
    w = g.longest_element([1, 2])
    C = compute_C(L, w)
    expected = {y: mono(L.of_index(y) - L.of_index(w)) for y in g.parabolic_elements([1, 2])}
    assert C.as_dict() == expected


@pytest.mark.parametrize("group,params,R", CASES)
def test_defining_properties(group, params, R):
    T = kl_table(W(group, params), R)
    g = T.group
    for w in range(g.ball_size(R)):
        C = T.C(w)
        assert bar(C) == C
        for y, p in T.column(w).items():
            if y == w:
                assert p == ONE
                continue
            assert p.in_strictly_negative()
            assert g.bruhat_leq(y, w)


@pytest.mark.parametrize("group,params,R", CASES)
def test_mu_recursion_oracle(group, params, R):
    L = W(group, params)
    T = kl_table(L, R)
    cols = mu_recursion_table(L, R)
    for w in range(T.group.ball_size(R)):
        assert cols[w] == T.column(w), T.group.name(w)


@pytest.mark.skipif(kernel.compiled_solve_column is None, reason="compiled kernel not built")
@pytest.mark.parametrize("group,params,R", CASES[:3])
def test_compiled_and_python_backends_agree(group, params, R):
    L = W(group, params)
    a = KLTable(L, R, backend="cython")
    b = KLTable(L, R, backend="python")
    assert all(a.column(w) == b.column(w) for w in range(a.n))


def test_column_solve_order_is_irrelevant():
    L = W("b2", (3, 2, 1))
    T = KLTable(L, 7, backend="python")
    g = T.group
    arrays = [a.tolist() for a in T._r_arrays()]
    order = list(range(T.n))
    random.Random(5).shuffle(order)
    for w in order:
        out = dict(kernel.python_solve_column(w, list(iter_bits(g.lower_interval(w))), *arrays))
        got = {y: p.coeffs for y, p in T.column(w).items() if y != w}
        assert {y: c for y, c in out.items()} == got


def test_structure_constants_left():
    L = W("g2", (3, 1))
    T = kl_table(L, 10)
    g = T.group
    for y in range(g.ball_size(8)):
        for s in g.S:
            res = T.left_product(s, y)
            assert res.complete
            sy = g.lmul(s, y)
            if g.length_of(sy) < g.length_of(y):
                assert res.coeffs == {y: mono(L[s]) + mono(-L[s])}
            else:
                assert res.coeffs[sy] == ONE
                for z, c in res.coeffs.items():
                    assert c.is_bar_invariant()
                    if z != sy:
                        assert g.length_of(g.lmul(s, z)) < g.length_of(z)
                        assert g.bruhat_leq(z, y)


def test_right_product_routes_agree():
    L = W("b2", (5, 3, 2))
    T = kl_table(L, 9)
    g = T.group
    for y in range(g.ball_size(7)):
        for s in g.S:
            assert T.right_product(y, s).coeffs == T.right_product_direct(y, s).coeffs
    assert structure_constant_right(L, 0, 1, 9).coeffs == {g.rmul(0, 1): ONE}
    assert structure_constant_left(L, 1, 0, 9).coeffs == {g.rmul(0, 1): ONE}


def test_truncation_is_flagged():
    L = W("g2", (2, 1))
    T = KLTable(L, 5)
    g = T.group
    w = g.ball_size(5) - 1
    assert not T.left_product(0, w).complete
    g.ensure_radius(7)
    with pytest.raises(TruncationError):
        T.P(0, g.ball_size(6) - 1)


def test_h_full_bounds():
    L = W("g2", (3, 1))
    T = kl_table(L, 10)
    g = T.group
    N = L.N()
    n = g.ball_size(4)
    for x in range(n):
        for y in range(n):
            res = h_full(L, x, y, 10)
            assert res.complete
            for z, h in res.coeffs.items():
                assert h.is_bar_invariant()
                assert h.degree <= N
    assert h_full(L, 0, g.parse("121"), 10).coeffs == {g.parse("121"): ONE}


def test_longest_element_a_value_i2_3():
    L = W("i2(3)", (1, 1))
    g = L.group
    g.ensure_radius(3)
    w0 = g.longest_element([0, 1])
    res = h_full(L, w0, w0, 3)
    assert res.coeffs[w0].degree == 3 == L.of_index(w0)


def test_json_export():
    T = kl_table(W("i2(3)", (1, 1)), 3)
    data = json.loads(T.dumps())
    assert data["schema"] == 1 and data["weights"] == [1]
    rows = {r["w"]: r["P"] for r in data["table"]}
    assert rows["1"] == [{"y": "e", "poly": "v^-1"}]
    assert {p["y"] for p in rows["121"]} == {"e", "1", "2", "12", "21"}


def test_hecke_element_wraps_column():
    T = kl_table(W("g2", (1, 1)), 4)
    assert isinstance(T.C(3), HeckeElement)
    assert T.mu(0, T.group.parse("1")) == 1
