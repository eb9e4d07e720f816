from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hallrud import gf
from hallrud import quiver as Q
from hallrud.catalog import (
    LABEL_M, LABEL_MP, IsoClass, Label, enumerate_isoclasses, hom_dim_formula, I, indecomposables_within,
    iso, P, Pp, Reg, RegP, rep_of_class, rep_of_label, rep_of_labels,
)

F2, F3 = gf.field(2), gf.field(3)


def test_relations_examples():
    assert Q.check_relations(rep_of_label(LABEL_M, F2))
    assert Q.check_relations(Q.make_rep(F2, 1, 1, [[1]], [[1]]))
    bad = Q.make_rep(F2, 2, 2, gf.identity(2), None, gf.identity(2), None)
    assert not Q.check_relations(bad)


def test_hom_examples():
    assert Q.hom_dim(rep_of_label(P(0), F2), rep_of_label(P(2), F2)) == 3
    assert Q.hom_dim(rep_of_label(LABEL_M, F2), rep_of_label(P(1), F2)) == 1
    for phi in gf.irreducible_polys(1, F3):
        for pi in gf.irreducible_polys(1, F3):
            assert Q.hom_dim(rep_of_label(Reg(phi, 1), F3), rep_of_label(RegP(pi, 1), F3)) == 1


def test_hom_basis_elements_are_morphisms():
    X, Y = rep_of_label(P(1), F3), rep_of_class(iso("I0", "P1", "M"), F3)
    for g in Q.hom_basis(X, Y):
        assert Q.is_morphism(X, Y, g)


def test_ext_examples():
    for phi in gf.irreducible_polys(1, F2):
        X = rep_of_label(Reg(phi, 1), F2)
        assert Q.ext_dim(X, rep_of_label(Pp(1), F2)) == 0
        assert Q.ext_dim(rep_of_label(Pp(1), F2), X) == 1
    for n in range(3):
        Pn = rep_of_label(P(n), F2)
        assert Q.ext_dim(Pn, Pn) == 0


def _nonzero_class(X, Y):
    space = Q.ext1_space(X, Y)
    assert space.dim == 1
    return next(c for c in Q.ext_elements(space) if Q.cocycle_vector(c).any())


def test_middle_terms():
    P1, I0 = rep_of_label(P(1), F2), rep_of_label(I(0), F2)
    split = Q.middle_term(P1, I0, None)
    assert IsoClass(Q.decompose(split)) == iso("I0", "P1")
    assert Q.decompose(Q.middle_term(P1, I0, _nonzero_class(P1, I0))) == [LABEL_M]
    for phi in gf.irreducible_polys(1, F2):
        X, Y = rep_of_label(Reg(phi, 1), F2), rep_of_label(RegP(phi, 1), F2)
        assert Q.decompose(Q.middle_term(X, Y, _nonzero_class(X, Y))) == [LABEL_M]


def test_automorphism_examples():
    assert Q.aut_count(rep_of_label(LABEL_M, F3), "brute") == 6
    I0 = rep_of_label(I(0), F3)
    assert Q.end_dim(I0) == 1 and Q.aut_count(I0) == 2
    for q in (2, 3):
        F = gf.field(q)
        for d in (1, 2):
            for phi in gf.irreducible_polys(d, F):
                for k in (1, 2):
                    if d * k > 2:
                        continue
                    want = q ** (d * k) - q ** (d * k - d)
                    assert Q.aut_count(rep_of_label(Reg(phi, k), F), "brute") == want


def test_decompose_examples():
    assert Q.decompose(rep_of_label(LABEL_M, F2)) == [LABEL_M]
    R = Q.make_rep(F2, 2, 2, gf.identity(2), [[0, 1], [0, 0]])
    assert Q.decompose(R) == [Reg(gf.parse_poly("x"), 2)]
    P1 = rep_of_label(P(1), F2)
    assert IsoClass(Q.decompose(Q.direct_sum([P1, Q.sigma(P1)]))) == iso("P1", "P'1")
    assert Q.decompose(Q.zero_rep(F2)) == []


def test_kronecker_examples():
    one = gf.as_matrix([[1]])
    assert Q.kronecker_classify(one, one, F2) == [Reg(gf.parse_poly("x+1"), 1)]
    e = gf.as_matrix([[1], [0]])
    f = gf.as_matrix([[0], [1]])
    assert Q.kronecker_classify(e, f, F2) == [P(1)]
    assert Q.kronecker_classify(gf.as_matrix([[0]]), one, F2) == [Reg(gf.Poly(()), 1)]


LABELS_33 = indecomposables_within(2, 3, 3)


@pytest.mark.parametrize("X", LABELS_33, ids=str)
def test_hom_dimension_table(X):
    RX = rep_of_label(X, F2)
    for Y in LABELS_33:
        if X.dim[0] + Y.dim[0] <= 3 and X.dim[1] + Y.dim[1] <= 3:
            assert Q.hom_dim(RX, rep_of_label(Y, F2)) == hom_dim_formula(X, Y), (X, Y)


@pytest.mark.parametrize("L", LABELS_33, ids=str)
def test_aut_count_formula_matches_bruteforce(L):
    R = rep_of_label(L, F2)
    assert Q.aut_count_bruteforce(R) == Q.aut_count_formula([L], 2, Q.end_dim(R))


@pytest.mark.parametrize("q", [2, 3])
def test_decompose_inverts_rep_of_labels(q):
    F = gf.field(q)
    for d1 in range(4):
        for d2 in range(4):
            for X in enumerate_isoclasses((d1, d2), F):
                assert IsoClass(Q.decompose(rep_of_class(X, F))) == X


def _random_invertible(rng, n, F):
    while True:
        g = rng.integers(0, F.q, size=(n, n))
        if gf.rank(g, F) == n:
            return g


CLASSES_Q3 = [X for d1 in range(4) for d2 in range(4) for X in enumerate_isoclasses((d1, d2), 3) if not X.is_zero]


@settings(max_examples=80)
@given(st.sampled_from(CLASSES_Q3), st.integers(0, 2 ** 32 - 1))
def test_decompose_is_basis_independent(X, seed):
    rng = np.random.default_rng(seed)
    R = rep_of_class(X, F3)
    g1, g2 = _random_invertible(rng, R.d1, F3), _random_invertible(rng, R.d2, F3)
    h1, h2 = gf.inverse(g1, F3), gf.inverse(g2, F3)
    mm = F3.matmul
    S = Q.make_rep(F3, R.d1, R.d2, mm(mm(g2, R.e), h1), mm(mm(g2, R.f), h1),
                   mm(mm(g1, R.ep), h2), mm(mm(g1, R.fp), h2))
    assert Q.check_relations(S)
    assert IsoClass(Q.decompose(S)) == X


@pytest.mark.parametrize("L", LABELS_33, ids=str)
def test_dualities(L):
    assert L.sigma().sigma() == L and L.tau().tau() == L
    assert L.sigma().tau() == L.tau().sigma()
    R = rep_of_label(L, F2)
    assert Q.decompose(Q.sigma(R)) == [L.sigma()]
    assert Q.decompose(Q.tau(R)) == [L.tau()]


def test_dualities_on_named_labels():
    assert P(2).sigma() == Pp(2)
    assert LABEL_M.tau() == LABEL_M
    assert I(1).sigma().tau() == P(1)


def test_json_roundtrip():
    R = rep_of_class(iso("M", "P1", "R(x;1)"), F3)
    S = Q.rep_from_json(R.to_json())
    assert S.key() == R.key()


def test_bad_shapes_rejected():
    with pytest.raises(ValueError):
        Q.QuiverRep(1, 1, gf.zeros(2, 1), gf.zeros(1, 1), gf.zeros(1, 1), gf.zeros(1, 1), F2)
