from hypothesis import given, settings
from hypothesis import strategies as st

from klcells.laurent import ONE, V, ZERO, LaurentPoly, mono

polys = st.dictionaries(st.integers(-20, 20), st.integers(-50, 50), max_size=6).map(LaurentPoly)


def test_add_cancellation():
    assert (V + V.bar()) + (-V.bar()) == V
    assert ZERO + V == V
    a = 2
    assert (mono(a) - mono(-a)) + mono(-a) == mono(2)


def test_mul_examples():
    assert (V + V.bar()) * (V - V.bar()) == mono(2) - mono(-2)
    assert mono(3) * mono(-3) == ONE
    assert (V + 1) * (V + 1) == mono(2) + 2 * V + 1


def test_bar_examples():
    assert V.bar() == mono(-1)
    assert LaurentPoly({0: 3}).bar() == LaurentPoly({0: 3})
    assert (mono(2) - mono(-2)).bar() == mono(-2) - mono(2)


def test_filtration():
    p = mono(-1) + 2 * mono(-3)
    assert p.in_strictly_negative()
    assert not ONE.in_strictly_negative() and ONE.in_nonpositive()
    assert not (V - mono(-1)).in_strictly_negative()


def test_canonical_form_and_degrees():
    p = LaurentPoly({3: 0, -2: 5, 1: -1})
    assert p.coeffs == {-2: 5, 1: -1}
    assert p.degree == 1 and p.valuation == -2
    assert ZERO.degree is None and not ZERO


def test_text_round_trip():
    p = LaurentPoly.parse("3v^2 - v^-4 + 1")
    assert p == 3 * mono(2) - mono(-4) + 1
    assert LaurentPoly.parse(str(p)) == p
    assert LaurentPoly.parse("v + v^-1") == V + V.bar()


@settings(max_examples=60)
@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + q == q + p and p * q == q * p


@settings(max_examples=60)
@given(polys, polys)
def test_bar_is_ring_involution(p, q):
    assert (p * q).bar() == p.bar() * q.bar()
    assert (p + q).bar() == p.bar() + q.bar()
    assert p.bar().bar() == p


@settings(max_examples=60)
@given(polys, polys)
def test_degree_of_product(p, q):
    if p and q:
        assert (p * q).degree == p.degree + q.degree


@given(polys, polys)
def test_negative_part_closed_under_sum(p, q):
    p, q = p.negative_part(), q.negative_part()
    assert p.in_strictly_negative() or not p
    assert (p + q).in_strictly_negative() or not (p + q)


def test_big_coefficients_do_not_wrap():
    p = LaurentPoly({0: 2**62})
    assert (p * p)[0] == 2**124
