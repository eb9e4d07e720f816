from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from hallrud import quantum as qa
from hallrud.scalars import RatFun, qnum

V = RatFun.v_pow
VV = V(1) - V(-1)


def w(text, shifts=(1, 1)):
    return qa.pbw_normalize(qa.parse_word(text), shifts)


def test_e_commutation_example():
    assert w("E[0] E[1]") == w("E[1] E[0]").scale(V(-2))


def test_h_commutator_example():
    lhs = w("H[1] H[-1]") - w("H[-1] H[1]")
    rhs = (qa.Cg(2) - qa.Cg(-2)).scale(qnum(2) / VV)
    assert lhs == rhs


def test_e_f_commutator_example():
    lhs = w("E[0] F[0]") - w("F[0] E[0]")
    K, Kinv = qa.k_power(1), qa.k_power(-1)
    assert lhs == K * qa.Hg(1) + Kinv * qa.Hg(-1)


def test_psi_examples():
    K = qa.k_power(1)
    assert qa.psi_of_h(-1) == K
    assert qa.psi_of_h(0) == (K * qa.Hg(1)).scale(VV)
    H1, H2 = qa.Hg(1), qa.Hg(2)
    want = K * (H2.scale(VV) + (H1 * H1).scale(VV * VV / RatFun.const(2)))
    assert qa.psi_of_h(1) == want
    assert qa.psi_of_h(-2) == qa.QAElem((1, 1))


@pytest.mark.parametrize("n", [1, 2, 3, -1, -2, -3])
@pytest.mark.parametrize("shifts", [(1, 1), (0, 2)])
def test_h_psi_roundtrip(n, shifts):
    assert qa.h_of_psi(n, shifts=shifts) == qa.Hg(n, shifts)


@pytest.mark.parametrize("key,idx", [("e-f-commutator", {"k": 1, "l": -1}),
                                     ("e-f-commutator", {"k": 2, "l": -1}),
                                     ("h-h-commutator", {"l": 2, "k": -2}),
                                     ("e-reordering", {"k": 1, "l": -1})])
def test_relation_examples(key, idx):
    assert qa.verify_qa_relation(key, (1, 1), **idx)


def test_unknown_relation():
    with pytest.raises(qa.UnknownRelation):
        qa.verify_qa_relation("nope")


def test_integral_membership_examples():
    assert qa.integral_membership(w("E[0] F[2]"))
    assert not qa.integral_membership(qa.Eg(0).scale(VV.inverse()))
    assert qa.integral_membership(w("S C^1/2 S^-1 C^-1/2 S"))


def test_word_parsing():
    assert qa.parse_word("E[2]^2 H[-1] S^-1 C^3/2") == [("E", 2), ("E", 2), ("H", -1), ("S", -1), ("C", 3)]
    with pytest.raises(ValueError):
        qa.parse_word("E[")


def test_normal_form_text_roundtrip():
    x = w("F[1] E[0] H[2] S E[-1]")
    back = sum((qa.word_element(qa.element_word_symbols(m)).scale(c) for m, c in x.items()), qa.QAElem((1, 1)))
    assert back == x


def test_finite_presentation_examples():
    rep = qa.finite_presentation_check(2, 3)
    assert rep.ok
    assert all(rep.derived_matches.values()) and rep.relations


words = st.integers(0, 2 ** 32 - 1).map(lambda s: qa.random_word(random.Random(s), random.Random(s + 1).randint(0, 6)))


@settings(max_examples=40)
@given(words, st.sampled_from([(1, 1), (0, 2)]))
def test_normalization_idempotent(word, shifts):
    x = qa.pbw_normalize(word, shifts)
    again = sum((qa.word_element(qa.element_word_symbols(m), shifts).scale(c) for m, c in x.items()),
                qa.QAElem(shifts))
    assert again == x
    assert all(qa.is_normal(m.word) for m, _ in x.items())


@settings(max_examples=40)
@given(words, st.integers(0, 6), st.sampled_from([(1, 1), (0, 2)]))
def test_normalization_associative(word, cut, shifts):
    a, b = word[:cut], word[cut:]
    na, nb = qa.pbw_normalize(a, shifts), qa.pbw_normalize(b, shifts)
    assert na * nb == qa.pbw_normalize(word, shifts)


@settings(max_examples=25)
@given(words)
def test_shift_transport_commutes_with_normalization(word):
    T = qa.shift_transport((1, 1))
    assert T.target == (0, 2)
    assert T.element(qa.pbw_normalize(word, (1, 1))) == qa.pbw_normalize(T.word(word), (0, 2))
