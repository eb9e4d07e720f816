from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hallrud import gf
from hallrud.scalars import gaussian_binomial

F2, F3, F4 = gf.field(2), gf.field(3), gf.field(4)


def test_extension_field_is_a_field():
    for a in F4.nonzero():
        assert F4.s_mul(a, F4.s_inv(a)) == 1
    # the multiplicative group of F_4 is cyclic of order 3
    assert any(len({F4.s_mul(g, F4.s_mul(g, g)), F4.s_mul(g, g), g}) == 3 for g in F4.nonzero())


def test_kernel_of_zero_matrix():
    K = gf.kernel_basis(gf.zeros(1, 1), F2)
    assert K.shape[0] == 1 and K[0, 0] == 1


def test_rank_of_identity():
    assert gf.rank(gf.identity(3), F3) == 3


def test_solve_right():
    A = gf.as_matrix([[1, 1], [0, 1]])
    X = gf.solve_right(A, gf.identity(2), F2)
    assert np.array_equal(F2.matmul(X, A), gf.identity(2))
    assert np.array_equal(X, gf.as_matrix([[1, 1], [0, 1]]))


def test_inconsistent_system_raises():
    with pytest.raises(gf.InconsistentSystem):
        gf.solve(gf.zeros(1, 1), gf.as_matrix([[1]]), F2)


@pytest.mark.parametrize("n,k,q", [(n, k, q) for q in (2, 3) for n in range(6) for k in range(n + 1)
                                   if q == 2 or n <= 4])
def test_subspace_count_matches_gaussian_binomial(n, k, q):
    F = gf.field(q)
    subs = list(gf.enumerate_subspaces(n, k, F))
    assert len(subs) == gaussian_binomial(n, k, q) == gf.count_subspaces(n, k, q)
    assert len({s.tobytes() for s in subs}) == len(subs)


def test_subspace_examples():
    assert len(list(gf.enumerate_subspaces(2, 1, F2))) == 3
    assert len(list(gf.enumerate_subspaces(4, 2, F2))) == 35
    assert len(list(gf.enumerate_subspaces(3, 3, F2))) == 1


def test_irreducibles_small():
    assert gf.irreducible_polys(2, F2) == [gf.parse_poly("x^2+x+1")]
    sigma1 = gf.irreducible_polys(1, F2)
    assert len(sigma1) == 3 and gf.Poly(()) in sigma1


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("l", [1, 2, 3, 4])
def test_sigma_counts_add_up(q, l):
    assert gf.sigma_sizes(l, gf.field(q)) == q ** l + 1


def test_block_companion_examples():
    assert np.array_equal(gf.block_companion(gf.parse_poly("x"), 2, F2), gf.as_matrix([[0, 1], [0, 0]]))
    C = gf.block_companion(gf.parse_poly("x^2+x+1"), 1, F2)
    assert np.array_equal(C, gf.as_matrix([[0, 1], [1, 1]]))
    assert gf.charpoly(C, F2) == [1, 1, 1]
    J = gf.block_companion(gf.parse_poly("x+2"), 3, F3)
    assert np.array_equal(J, gf.as_matrix([[1, 1, 0], [0, 1, 1], [0, 0, 1]]))
    with pytest.raises(ValueError):
        gf.block_companion(gf.Poly(()), 1, F2)


def test_similarity_examples():
    I = gf.identity(2)
    assert gf.similar(I, I, F2)
    assert not gf.similar(gf.as_matrix([[0, 1], [0, 0]]), gf.zeros(2, 2), F2)
    assert gf.similar(gf.as_matrix([[1, 1], [0, 1]]), gf.block_companion(gf.parse_poly("x+1"), 2, F2), F2)


def _conjugacy_orbits(n: int, F: gf.FqField) -> list[set]:
    mats = [np.array(v, dtype=np.int64).reshape(n, n) for v in itertools.product(range(F.q), repeat=n * n)]
    group = [(g, gf.inverse(g, F)) for g in mats if gf.rank(g, F) == n]
    seen, orbits = set(), []
    for A in mats:
        if A.tobytes() in seen:
            continue
        orbit = {F.matmul(F.matmul(g, A), gi).tobytes() for g, gi in group}
        seen |= orbit
        orbits.append(orbit)
    return orbits


@pytest.mark.parametrize("n", [2, 3])
def test_similarity_matches_conjugation_orbits(n):
    orbits = _conjugacy_orbits(n, F2)
    reps = [np.frombuffer(next(iter(o)), dtype=np.int64).reshape(n, n) for o in orbits]
    for o, r in zip(orbits, reps):
        for b in o:
            assert gf.similar(np.frombuffer(b, dtype=np.int64).reshape(n, n), r, F2)
    for i, j in itertools.combinations(range(len(reps)), 2):
        assert not gf.similar(reps[i], reps[j], F2)


def test_similarity_bruteforce_oracle_agrees():
    mats = [np.array(v, dtype=np.int64).reshape(2, 2) for v in itertools.product(range(2), repeat=4)]
    for A, B in itertools.product(mats, repeat=2):
        assert gf.similar(A, B, F2) == gf.similar_bruteforce(A, B, F2)


def test_factor_roundtrip():
    f = gf.p_mul(gf.p_mul([1, 1], [1, 1], F3), [2, 0, 1], F3)
    parts = gf.factor(f, F3)
    prod = [1]
    for phi, m in parts:
        for _ in range(m):
            prod = gf.p_mul(prod, list(phi.coeffs), F3)
    assert prod == gf.p_trim(list(f))


def test_jordan_examples():
    assert gf.count_jordan_completions(gf.parse_poly("x+1"), 1, 1, F2) == 1
    assert gf.count_jordan_completions(gf.parse_poly("x"), 0, 2, F2) == 1
    assert gf.count_jordan_completions(gf.parse_poly("x"), 1, 1, F3) == 2


matrices = st.integers(1, 3).flatmap(
    lambda n: st.lists(st.integers(0, 2), min_size=n * n, max_size=n * n).map(
        lambda v: np.array(v, dtype=np.int64).reshape(n, n)))


@given(matrices)
def test_rank_nullity(A):
    assert gf.rank(A, F3) + gf.kernel_basis(A, F3).shape[0] == A.shape[1]


@given(matrices)
def test_invertible_matrices_have_inverses(A):
    if gf.rank(A, F3) == A.shape[0]:
        assert np.array_equal(F3.matmul(A, gf.inverse(A, F3)), gf.identity(A.shape[0]))


@given(matrices)
def test_cayley_hamilton(A):
    chi = gf.charpoly(A, F3)
    assert not gf.poly_of_matrix(chi, A, F3).any()
