from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hallrud.scalars import (
    ContextMismatch, PrimePower, QScalar, RatFun, gaussian_binomial, gl_order, parse_qscalar,
    qbinomial, qnum, quantum_number, specialize_v,
)

P2, P3, P4 = PrimePower.from_q(2), PrimePower.from_q(3), PrimePower.from_q(4)


def test_prime_power_parsing():
    assert (P4.p, P4.e, P4.q) == (2, 2, 4)
    for bad in (0, 1, 6, 12):
        with pytest.raises(ValueError):
            PrimePower.from_q(bad)


def test_difference_of_squares():
    u = QScalar.u_pow(P2, 1)
    one = QScalar.const(P2, 1)
    assert (one + u) * (one - u) == one - u * u


def test_fourth_power_of_u_is_p():
    u = QScalar.u_pow(P3, 1)
    assert u * u * u * u == QScalar.const(P3, 3)


def test_inverse_of_u_squared():
    u2 = QScalar.u_pow(P2, 2)
    inv = u2.inverse()
    assert inv == u2 * Fraction(1, 2)
    assert u2 * inv == QScalar.const(P2, 1)


def test_mixing_fields_fails():
    with pytest.raises(ContextMismatch):
        QScalar.const(P2, 1) + QScalar.const(P3, 1)


def test_quantum_numbers():
    assert qnum(1) == RatFun.const(1)
    assert qnum(2) == RatFun.v_pow(1) + RatFun.v_pow(-1)
    assert quantum_number(2, P4) == QScalar.const(P4, Fraction(5, 2))


def test_specialize_v():
    assert specialize_v(RatFun.v_pow(2), P3) == QScalar.const(P3, 3)
    x = specialize_v((RatFun.v_pow(1) - RatFun.v_pow(-1)).inverse(), P2)
    assert x == QScalar.u_pow(P2, 2)
    assert specialize_v(qnum(2), P2) == QScalar.u_pow(P2, 2) * Fraction(3, 2)


def test_text_roundtrip():
    x = QScalar.u_pow(P3, 3) * 5 + QScalar.const(P3, Fraction(-2, 7))
    assert parse_qscalar(str(x), P3) == x


def test_ratfun_text():
    assert str(qnum(2)) == "v + v^-1"
    assert str(RatFun.const(0)) == "0"
    assert str(qnum(2).inverse()) == "(v)/(v^2 + 1)"


def test_gl_order_and_gaussian_binomial():
    assert gl_order(2, 2) == 6
    assert gl_order(2, 3) == 48
    assert gaussian_binomial(4, 2, 2) == 35


def test_qbinomial_specializes_to_gaussian():
    # [n choose k]_v at v^2 = q equals q^{-k(n-k)/2} times the Gaussian binomial
    for n in range(5):
        for k in range(n + 1):
            val = specialize_v(qbinomial(n, k), P2)
            want = QScalar.q_pow(P2, Fraction(-k * (n - k), 2)) * gaussian_binomial(n, k, 2)
            assert val == want


small = st.fractions(min_value=-5, max_value=5, max_denominator=4)
scalars = st.builds(lambda cs: sum((QScalar.u_pow(P3, i) * c for i, c in enumerate(cs)), QScalar.const(P3, 0)),
                    st.lists(small, min_size=4, max_size=4))


@given(scalars, scalars, scalars)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(scalars)
def test_nonzero_scalars_are_invertible(a):
    if a.is_zero:
        return
    assert a * a.inverse() == QScalar.const(P3, 1)


laurent = st.dictionaries(st.integers(-4, 4), st.integers(-3, 3), max_size=4)


@given(laurent, laurent)
def test_ratfun_laurent_product(f, g):
    F, G = RatFun.laurent(f), RatFun.laurent(g)
    want: dict = {}
    for i, a in f.items():
        for j, b in g.items():
            want[i + j] = want.get(i + j, 0) + a * b
    assert F * G == RatFun.laurent(want)
    if not F.is_zero:
        assert (G * F) / F == G
