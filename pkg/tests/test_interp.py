from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from hallrud import interp as ip
from hallrud.catalog import iso
from hallrud.scalars import PrimePower, QScalar


def test_laurent_text():
    assert ip.laurent_text({2: 1, 0: -3}) == "v^2 - 3"
    assert ip.laurent_text({}) == "0"
    assert ip.laurent_text({-1: -2, 1: 1}) == "v - 2*v^-1"
    assert ip.laurent_text({0: 0}) == "0"


def test_r2_coefficient_is_one():
    fit = ip.structure_constant_poly("[I0]", "[P1]", "R2")
    assert fit.polynomial == "1" and fit.validated and fit.integral


def test_ordered_monomial_coefficient_is_q():
    fit = ip.structure_constant_poly("[I0]", "[P1]", "[P1][I0]")
    assert fit.coeffs == {2: 1} and fit.polynomial == "v^2" and fit.validated


def test_square_of_p0():
    fit = ip.structure_constant_poly("[P0]", "[P0]", "[P0]^2")
    assert fit.validated
    # the monomial [P0]^2 is the product itself
    assert fit.polynomial == "1"
    assert ip.structure_constant("[P0]", "[P0]", "[P0]^2", 7) == QScalar.const(PrimePower.from_q(7), 1)


def test_twisted_coefficient():
    fit = ip.structure_constant_poly("[I0]", "[P1]", "R2", twisted=True)
    assert fit.polynomial == "v^-2" and fit.validated


def test_a4_coefficient_is_not_integral():
    with pytest.raises(ip.NonIntegralFit) as err:
        ip.structure_constant_poly("[I0]", "[P1]", "a^4")
    assert [q for q, _ in err.value.samples] == [2, 3, 5]


def test_argument_validation():
    with pytest.raises(ip.InsufficientSamples):
        ip.structure_constant_poly("[I0]", "[P1]", "R2", q_list=[2, 2, 3])
    with pytest.raises(ip.InsufficientSamples):
        ip.structure_constant_poly("[I0]", "[P1]", "R2", q_list=[2, 3], q_holdout=3)
    with pytest.raises(ip.InsufficientSamples):
        ip.structure_constant_poly("[I0]", "[P1]", "R2", q_list=[])
    with pytest.raises(ValueError):
        ip.structure_constant_poly("[I0]", "[P1]", "R2", q_holdout=6)
    with pytest.raises(TypeError):
        ip.structure_constant(iso("I0"), "[P1]", "R2", 2)


def test_fit_json():
    fit = ip.structure_constant_poly("[I0]", "[P1]", "[P1][I0]")
    data = fit.to_json()
    assert data["polynomial"] == "v^2" and data["holdout"]["ok"] is True
    assert data["coefficients"] == {"2": 1}


def test_zero_samples_fit_zero():
    ctx = PrimePower.from_q(2)
    assert ip.fit_laurent([(2, QScalar.const(ctx, 0))], 4) == ({}, (0, -1))


polys = st.dictionaries(st.integers(-4, 4), st.integers(-3, 3).filter(bool), min_size=1, max_size=3)


@given(polys)
def test_fit_reproduces_samples(coeffs):
    samples = [(q, ip.laurent_eval(coeffs, q)) for q in (2, 3, 5)]
    found = ip.fit_laurent(samples, 8)
    assert found is not None
    fit, _ = found
    for q, val in samples:
        assert ip.laurent_eval(fit, q) == val


@given(st.integers(-6, 6), st.integers(-3, 3).filter(bool))
def test_fit_recovers_monomials(k, c):
    samples = [(q, ip.laurent_eval({k: c}, q)) for q in (2, 3, 5)]
    assert ip.fit_laurent(samples, 8)[0] == {k: c}
