from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hallrud import gf
from hallrud import quiver as Q
from hallrud.catalog import (
    LABEL_M, LABEL_MP, IsoClass, Label, aut_count_class, enumerate_isoclasses, hom_dim_formula, I,
    indecomposables_within, iso, P, parse_isoclass, parse_label, poly_of_point, Reg, rep_of_class,
    rep_of_label, sigma1_point,
)

F2, F3 = gf.field(2), gf.field(3)


def test_simple_representatives():
    R = rep_of_label(P(0), F2)
    assert R.dim == (0, 1) and R.e.size == 0
    assert rep_of_label(I(0), F2).dim == (1, 0)


def test_degree_two_regular():
    R = rep_of_label(Reg(gf.parse_poly("x^2+x+1"), 1), F2)
    assert np.array_equal(R.e, gf.identity(2))
    assert np.array_equal(R.f, gf.companion(gf.parse_poly("x^2+x+1"), F2))


def test_every_representative_satisfies_relations():
    for q in (2, 3):
        for L in indecomposables_within(q, 3, 3):
            R = rep_of_label(L, gf.field(q))
            assert R.dim == L.dim
            assert Q.check_relations(R)


def test_enumeration_examples():
    for q in (2, 3, 4):
        assert enumerate_isoclasses((1, 0), q) == [iso("I0")]
    classes = enumerate_isoclasses((1, 1), 2)
    assert len(classes) == 7
    assert iso("I0", "P0") in classes


def test_enumeration_is_duplicate_free():
    for d in ((2, 2), (3, 2), (3, 3)):
        classes = enumerate_isoclasses(d, 2)
        assert len(set(classes)) == len(classes)
        assert all(X.dim == d for X in classes)


def test_hom_formula_examples():
    assert hom_dim_formula(P(1), P(3)) == 3
    phi = gf.parse_poly("x")
    assert hom_dim_formula(Reg(phi, 2), Reg(phi, 3)) == 2
    for L in indecomposables_within(2, 3, 3):
        assert hom_dim_formula(LABEL_M, L) == L.dim[0]


@pytest.mark.parametrize("text", ["P0", "I'2", "R(x+1;2)", "R'(0;1)", "R(x^2+x+1;1)", "M", "M'"])
def test_label_text_roundtrip(text):
    assert str(parse_label(text)) == text


def test_isoclass_text_roundtrip():
    X = iso("M", "P1", "R(x+1;2)", "P1")
    assert parse_isoclass(str(X)) == X
    assert parse_isoclass("0") == IsoClass()
    assert X.count(P(1)) == 2 and X.without(P(1), 2) == iso("M", "R(x+1;2)")


def test_bad_labels():
    with pytest.raises(ValueError):
        Label("Q", 1)
    with pytest.raises(ValueError):
        Label("R", 0, gf.parse_poly("x"))
    with pytest.raises(ValueError):
        Label("P", -1)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_sigma1_is_projective_line(q):
    F = gf.field(q)
    pts = [sigma1_point(phi, F) for phi in gf.irreducible_polys(1, F)]
    assert len(set(pts)) == q + 1
    for phi in gf.irreducible_polys(1, F):
        assert poly_of_point(sigma1_point(phi, F), F) == phi


def test_aut_count_class_matches_bruteforce():
    for X in enumerate_isoclasses((2, 2), 2) + enumerate_isoclasses((2, 1), 2):
        assert aut_count_class(X, 2) == Q.aut_count(rep_of_class(X, F2), "brute"), X


@given(st.lists(st.sampled_from(indecomposables_within(2, 2, 2)), max_size=4))
def test_isoclass_is_a_multiset(labels):
    X = IsoClass(labels)
    assert X == IsoClass(list(reversed(labels)))
    assert X.dim == (sum(L.dim[0] for L in labels), sum(L.dim[1] for L in labels))
    assert X.sigma().sigma() == X and X.tau().tau() == X
