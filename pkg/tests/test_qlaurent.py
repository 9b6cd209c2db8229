"""Ring laws and canonical form of the exact Laurent kernel."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fdegcheck.qlaurent import QLaurent

coeffs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
laurents = st.dictionaries(st.integers(-6, 6), coeffs, max_size=5).map(QLaurent)


def test_canonical_form_drops_zeros():
    assert QLaurent({3: 0, 1: 2}).coeffs == {1: Fraction(2)}
    assert QLaurent({2: 1, -2: -1}) + QLaurent({-2: 1}) == QLaurent({2: 1})
    assert QLaurent.zero().is_zero()


def test_monomial_helpers():
    m = QLaurent.q_power(Fraction(3, 2))
    assert m.monomial_parts() == (3, Fraction(1))
    assert m.monomial_inverse() * m == QLaurent.one()
    with pytest.raises(ValueError):
        QLaurent.q_power(Fraction(1, 3))
    with pytest.raises(ValueError):
        (QLaurent.one() + QLaurent.v()).monomial_parts()


@given(laurents, laurents)
def test_addition_commutes(a, b):
    assert a + b == b + a


@given(laurents, laurents, laurents)
def test_multiplication_associates_and_distributes(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(laurents)
def test_units_and_negation(a):
    assert a + QLaurent.zero() == a
    assert a * QLaurent.one() == a
    assert (a - a).is_zero()


@given(laurents, laurents)
def test_evaluation_at_one_is_ring_hom(a, b):
    assert (a * b).evaluate_at_one() == a.evaluate_at_one() * b.evaluate_at_one()
    assert (a + b).evaluate_at_one() == a.evaluate_at_one() + b.evaluate_at_one()


def test_sparse_rendering():
    x = QLaurent({3: Fraction(1, 2), -1: 2})
    assert x.to_sparse() == {"-1": "2", "3": "1/2"}
    assert str(QLaurent({2: 1})) == "v^2"
