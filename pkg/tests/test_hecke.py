import random

import pytest

from klcells.coxeter import get_group
from klcells.hecke import HeckeAlgebra, algebra_for, bar, mul, mul_Ts_left
from klcells.laurent import ONE, mono
from klcells.weights import WeightFunction


@pytest.fixture(scope="module")
def H():
    return algebra_for(WeightFunction.from_params("g2", (3, 1)))


def test_generator_rule(H):
    g = H.group
    s = g.parse("1")
    assert mul_Ts_left(0, H.one()) == H.T(s)
    q = mono(3) - mono(-3)
    assert mul_Ts_left(0, H.T(s)) == H.one() + H.T(s, q)
    assert mul(H.T("1"), H.T("2")) == H.T("12")
    assert mul(H.T("2"), H.T("2")) == H.one() + H.T("2", mono(1) - mono(-1))


def test_lengths_add(H):
    g = H.group
    g.ensure_radius(10)
    rng = random.Random(1)
    for _ in range(30):
        x, y = rng.randrange(g.ball_size(4)), rng.randrange(g.ball_size(4))
        xy = g.mul(x, y)
        if g.length_of(xy) == g.length_of(x) + g.length_of(y):
            assert mul(H.T(x), H.T(y)) == H.T(xy)


def test_associativity(H):
    g = H.group
    g.ensure_radius(15)
    rng = random.Random(2)
    n = g.ball_size(5)
    for _ in range(15):
        a, b, c = (H.T(rng.randrange(n), mono(rng.randint(-2, 2))) for _ in range(3))
        assert mul(mul(a, b), c) == mul(a, mul(b, c))
    x, y, z = H.T("1"), H.T("2"), H.T("1")
    assert mul(mul(x, y), z) == mul(x, mul(y, z))


def test_product_against_generator_iteration(H):
    g = H.group
    w = g.parse("12")
    winv = g.inv(w)
    expected = H.T(winv)
    for s in reversed(g.word_of(w)):
        expected = mul_Ts_left(s, expected)
    assert mul(H.T(w), H.T(winv)) == expected
    assert expected.coeff(0) == ONE


def test_two_multiplication_orders_agree():
    A = algebra_for(WeightFunction.from_params("i2(6)", (1, 1)))
    x, y = A.T("121"), A.T("212")
    assert A.mul(x, y) == A.mul_right_oracle(x, y)
    B = algebra_for(WeightFunction.from_params("b2", (3, 2, 1)))
    B.group.ensure_radius(8)
    rng = random.Random(3)
    n = B.group.ball_size(4)
    for _ in range(10):
        x, y = B.T(rng.randrange(n)), B.T(rng.randrange(n))
        assert B.mul(x, y) == B.mul_right_oracle(x, y)


def test_bar_examples(H):
    assert bar(H.one()) == H.one()
    bs = bar(H.T("1"))
    assert bs == H.T("1") - H.T(0, mono(3) - mono(-3))
    # bar(T_s) is the inverse of T_s
    assert mul(H.T("1"), bs) == H.one()
    assert H.Ts_inverse(0) == bs


def test_bar_involution_and_multiplicative(H):
    g = H.group
    g.ensure_radius(12)
    for w in g.ball_indices(6):
        assert bar(bar(H.T(w))) == H.T(w)
    rng = random.Random(4)
    n = g.ball_size(4)
    for _ in range(10):
        a = H.T(rng.randrange(n), mono(rng.randint(-3, 3)) + 2)
        b = H.T(rng.randrange(n), mono(rng.randint(-3, 3)))
        assert bar(mul(a, b)) == mul(bar(a), bar(b))
        assert bar(a + b) == bar(a) + bar(b)


def test_json_export(H):
    h = H.T("12", mono(2)) + H.T(0, 3)
    assert h.to_json() == {"12": "v^2", "e": "3"}


def test_mixed_algebras_rejected(H):
    other = HeckeAlgebra(WeightFunction.from_params("g2", (1, 1)))
    with pytest.raises(ValueError):
        mul(H.T("1"), other.T("1"))


def test_nonpositive_weights_rejected():
    with pytest.raises(ValueError):
        HeckeAlgebra(WeightFunction.from_params("g2", (0, 1)))
