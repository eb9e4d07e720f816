from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hallrud import gf
from hallrud import hall as H
from hallrud import spherical as sp
from hallrud.catalog import iso
from hallrud.scalars import PrimePower, QScalar


def L(q, *labels):
    return H.LocHallElem.basis(q, iso(*labels))


def const(q, c):
    return QScalar.const(PrimePower.from_q(q), c)


@pytest.mark.parametrize("q", [2, 3])
def test_theta_examples(q):
    R1, R1p = H.build_Rn(1, q), H.build_Rn_prime(1, q)
    R2, R2p = H.build_Rn(2, q), H.build_Rn_prime(2, q)
    assert sp.theta_beta((1, 1), q).thetaElem == (R1 + R1p).scale(const(q, q - 1))
    M, Mp = H.HallElem.basis(q, iso("M")), H.HallElem.basis(q, iso("M'"))
    want = (M.scale(const(q, q)) + Mp.scale(const(q, q)) + R2 + R2p).scale(const(q, q - 1))
    assert sp.theta_beta((2, 2), q).thetaElem == want
    assert sp.theta_beta((1, 0), q).thetaElem == H.HallElem.basis(q, iso("I0")).scale(const(q, q - 1))


def test_minimizer_report():
    rep = sp.theta_beta((1, 1), 2)
    assert rep.minC == 1 and len(rep.minimizers) == 6
    assert rep.to_json()["minC"] == 1


@pytest.mark.parametrize("q", [2, 3])
def test_express_examples(q):
    x = L(q, "I0").product(L(q, "P1"))
    coords = sp.express_in_spherical_basis(x)
    assert coords[sp.parse_monomial("[P1][I0]")] == const(q, q)
    assert coords[sp.parse_monomial("R2")] == const(q, 1)
    # the remaining term is -q [M], written through a^4 = (q-1)[M]
    assert coords[sp.parse_monomial("a^4")] == const(q, Fraction(-q, q - 1))
    assert len(coords) == 3
    theta = H.loc(sp.theta_beta((1, 1), q).thetaElem)
    assert sp.express_in_spherical_basis(theta) == {sp.parse_monomial("R1"): const(q, q - 1),
                                                    sp.parse_monomial("R'1"): const(q, q - 1)}


def test_single_regular_is_not_spherical():
    with pytest.raises(sp.NotInSubalgebra):
        sp.express_in_spherical_basis(L(2, "R(x;1)"))


@pytest.mark.parametrize("text", ["[P1][I0]", "R2", "a^4", "a'^-4 [P0]^2", "[I'1] R'1"])
def test_monomial_text(text):
    m = sp.parse_monomial(text)
    assert sp.parse_monomial(str(m)) == m


def test_noncanonical_order_rejected():
    with pytest.raises(ValueError):
        sp.parse_monomial("R'1 [I'1]")


def test_monomials_of_degree_are_distinct_elements():
    monos = sp.monomials_of_degree((1, 2))
    assert len(monos) == len(set(monos)) >= 3
    elems = [m.element(2) for m in monos]
    for i in range(len(elems)):
        for j in range(i):
            assert elems[i] != elems[j]


# headline identities rebuilt from raw products
@pytest.mark.parametrize("q", [2, 3])
def test_simples_commutator(q):
    I0, P0 = L(q, "I0"), L(q, "P0")
    R1, R1p = H.loc(H.build_Rn(1, q)), H.loc(H.build_Rn_prime(1, q))
    assert I0.product(P0) - P0.product(I0) == R1 - R1p


@pytest.mark.parametrize("q", [2, 3])
def test_i0_p1_qcommutator(q):
    I0, P1 = L(q, "I0"), L(q, "P1")
    lhs = I0.product(P1) - P1.product(I0).scale(const(q, q))
    assert lhs == H.loc(H.build_Rn(2, q)) - L(q, "M").scale(const(q, q))


@pytest.mark.parametrize("q", [2, 3])
def test_p1_p1p_commutator(q):
    P1, P1p = L(q, "P1"), L(q, "P'1")
    M, Mp = L(q, "M"), L(q, "M'")
    R1, R1p = H.loc(H.build_Rn(1, q)), H.loc(H.build_Rn_prime(1, q))
    want = (M.product(R1p) - Mp.product(R1)).scale(const(q, q - 1))
    assert P1.product(P1p) - P1p.product(P1) == want


@pytest.mark.parametrize("q", [2, 3])
def test_m_is_central(q):
    M, Mp = L(q, "M"), L(q, "M'")
    for X in ("I0", "P0", "P1", "I'1", "R(x;1)", "R'(0;1)"):
        x = L(q, X)
        assert M.product(x) == x.product(M)
        assert Mp.product(x) == x.product(Mp)


def test_ckconst_closed_form():
    for q in (2, 3):
        for d, m, n in ((1, 1, 1), (1, 2, 1), (2, 1, 1)):
            assert sp.ckconst_closed_form(d, m, n, 0, q) == q ** (d * d * m * n)


def test_identity_catalogue():
    keys = sp.identity_keys()
    assert "simples-commutator" in keys and len(keys) == len(set(keys))
    for k in keys:
        assert sp.identity_description(k)
    with pytest.raises(sp.UnknownIdentity):
        sp.verify_identity("no-such-identity", 2)


@pytest.mark.parametrize("key,params", [
    ("simples-commutator", {}), ("i0-p1-qcommutator", {}), ("p1-p1p-commutator", {}),
    ("regular-pair-commutator", {"phi": gf.parse_poly("x")}),
    ("kronecker-ip-product", {"n": 2, "i": 0}),
    ("a-reordering", {"m": 0, "n": 0}),
])
def test_verify_identity_examples(key, params):
    rep = sp.verify_identity(key, 3 if key == "kronecker-ip-product" else 2, **params)
    assert rep.holds
    assert rep.to_json()["holds"] is True


def test_series_log_exp_roundtrip():
    q = 3
    mul = lambda a, b: a.product(b)
    one = H.LocHallElem.a_pow(q, 0)
    Y = [one] + [H.LocHallElem.a_pow(q, k).scale(const(q, c)) for k, c in
                 enumerate((2, Fraction(-1, 3), 5, 7), start=1)]
    logs = sp.series_log(Y, mul, 4)
    back = sp.series_exp(logs, mul, one, 4)
    assert back[1:5] == Y[1:5]


@settings(max_examples=15)
@given(st.sampled_from(sp.monomials_of_degree((1, 1)) + sp.monomials_of_degree((0, 1))),
       st.sampled_from(sp.monomials_of_degree((1, 0)) + sp.monomials_of_degree((1, 1))))
def test_products_of_monomials_stay_spherical(X, Y):
    xy = X.element(2).product(Y.element(2))
    coords = sp.express_in_spherical_basis(xy)
    total = H.LocHallElem(2)
    for m, c in coords.items():
        total = total + m.element(2).scale(c)
    assert total == xy
