"""Linear algebra over F_q.

Field elements are the integers ``0..q-1``.  For ``q = p^e`` the integer ``n``
stands for the polynomial in the generator whose base-``p`` digits are the
coefficients of ``n``.  Arithmetic goes through precomputed numpy tables so
that a prime field and an extension field share the same code path.

Matrices are 2-d numpy ``int64`` arrays.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .scalars import PrimePower, gaussian_binomial


class InconsistentSystem(ValueError):
    pass


def _poly_mod_p_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Brute irreducibility test for a monic polynomial over F_p (low first)."""
    d = len(coeffs) - 1
    if d <= 1:
        return d == 1
    for k in range(1, d // 2 + 1):
        for tail in itertools.product(range(p), repeat=k):
            g = list(tail) + [1]
            r = list(coeffs)
            while len(r) >= len(g):
                c = r[-1] % p
                s = len(r) - len(g)
                for i, y in enumerate(g):
                    r[s + i] = (r[s + i] - c * y) % p
                r.pop()
            if not any(x % p for x in r):
                return False
    return True


@lru_cache(maxsize=None)
def least_modulus(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree ``e`` over F_p."""
    if e == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=e):
        # lexicographic on (c_{e-1}, ..., c_0)
        coeffs = tuple(reversed(tail)) + (1,)
        if _poly_mod_p_irreducible(coeffs, p):
            return coeffs
    raise RuntimeError("no irreducible polynomial found")


class FqField:
    """The finite field with ``q = p^e`` elements."""

    def __init__(self, ctx: PrimePower | int):
        if isinstance(ctx, int):
            ctx = PrimePower.from_q(ctx)
        self.ctx = ctx
        self.p, self.e, self.q = ctx.p, ctx.e, ctx.q
        self.modulus = least_modulus(self.p, self.e)
        if not _poly_mod_p_irreducible(self.modulus, self.p):
            raise ValueError("modulus is not irreducible")
        q = self.q
        self.prime = self.e == 1
        digits = [self._digits(a) for a in range(q)]
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(q):
                add[a, b] = self._undigits([(x + y) % self.p for x, y in zip(digits[a], digits[b])])
                mul[a, b] = self._undigits(self._polymulmod(digits[a], digits[b]))
        self.ADD, self.MUL = add, mul
        self.NEG = np.array([int(np.nonzero(add[a] == 0)[0][0]) for a in range(q)], dtype=np.int64)
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        self.INV = inv
        self._add = add.tolist()
        self._mul = mul.tolist()
        self._neg = self.NEG.tolist()
        self._inv = inv.tolist()

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, d: Sequence[int]) -> int:
        n = 0
        for x in reversed(d):
            n = n * self.p + x
        return n

    def _polymulmod(self, a, b):
        p, e, m = self.p, self.e, self.modulus
        r = [0] * (2 * e - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                r[i + j] = (r[i + j] + x * y) % p
        for k in range(len(r) - 1, e - 1, -1):
            c = r[k]
            if c:
                for i in range(e + 1):
                    r[k - e + i] = (r[k - e + i] - c * m[i]) % p
        return r[:e]

    def __eq__(self, other) -> bool:
        return isinstance(other, FqField) and other.ctx == self.ctx

    def __hash__(self) -> int:
        return hash(("FqField", self.ctx))

    def __repr__(self) -> str:
        return f"FqField(q={self.q})"

    # scalar operations on python ints
    def s_add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def s_sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def s_mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def s_neg(self, a: int) -> int:
        return self._neg[a]

    def s_inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_q")
        return self._inv[a]

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    # array operations
    def add(self, a, b):
        if self.prime:
            return (a + b) % self.p
        return self.ADD[a, b]

    def sub(self, a, b):
        if self.prime:
            return (a - b) % self.p
        return self.ADD[a, self.NEG[b]]

    def neg(self, a):
        if self.prime:
            return (-a) % self.p
        return self.NEG[a]

    def mul(self, a, b):
        if self.prime:
            return (a * b) % self.p
        return self.MUL[a, b]

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        if A.shape[1] != B.shape[0]:
            raise ValueError(f"shape mismatch {A.shape} x {B.shape}")
        if self.prime:
            return (A @ B) % self.p
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for k in range(A.shape[1]):
            out = self.ADD[out, self.MUL[A[:, k][:, None], B[k][None, :]]]
        return out

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` in F_q."""
        return self._undigits([n % self.p] + [0] * (self.e - 1))

    def element_name(self, a: int) -> str:
        return str(a)


@lru_cache(maxsize=None)
def field(q: int) -> FqField:
    return FqField(PrimePower.from_q(q))


def zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def as_matrix(rows, r: int | None = None, c: int | None = None) -> np.ndarray:
    a = np.array(rows, dtype=np.int64)
    if a.size == 0:
        return zeros(r or 0, c or 0)
    return a.reshape(len(rows), -1)


# ---------------------------------------------------------------------------
# elimination


def rref(A: np.ndarray, F: FqField) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    A = np.array(A, dtype=np.int64, copy=True)
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = F.s_inv(int(A[r, c]))
        col = A[:, c].copy()
        col[r] = 0
        if F.prime:
            if inv != 1:
                A[r] = (A[r] * inv) % F.p
            if col.any():
                A -= np.outer(col, A[r])
                A %= F.p
        else:
            if inv != 1:
                A[r] = F.mul(A[r], inv)
            if col.any():
                A = F.sub(A, F.mul(col[:, None], A[r][None, :]))
        pivots.append(c)
        r += 1
    return A, pivots


def rank(A: np.ndarray, F: FqField) -> int:
    if A.size == 0:
        return 0
    if not F.prime:
        return len(rref(A, F)[1])
    # forward elimination only
    p = F.p
    A = np.array(A, dtype=np.int64, copy=True) % p
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        below = A[r + 1:, c]
        if below.any():
            inv = pow(int(A[r, c]), -1, p)
            A[r + 1:] = (A[r + 1:] - np.outer((below * inv) % p, A[r])) % p
        r += 1
    return r


def kernel_basis(A: np.ndarray, F: FqField) -> np.ndarray:
    """Rows spanning ``{x : A x = 0}``, in reduced echelon form."""
    rows, cols = A.shape
    if rows == 0:
        return identity(cols)
    R, piv = rref(A, F)
    free = [c for c in range(cols) if c not in piv]
    K = zeros(len(free), cols)
    for k, fc in enumerate(free):
        K[k, fc] = 1
        for i, pc in enumerate(piv):
            K[k, pc] = F.s_neg(int(R[i, fc]))
    if K.shape[0] == 0:
        return K
    return rref(K, F)[0]


def solve_right(A: np.ndarray, B: np.ndarray, F: FqField) -> np.ndarray:
    """One solution ``X`` of ``A X = B``."""
    rows, cols = A.shape
    if B.ndim == 1:
        B = B[:, None]
    aug = np.concatenate([A, B], axis=1)
    R, piv = rref(aug, F)
    if any(p >= cols for p in piv):
        raise InconsistentSystem("system has no solution")
    X = zeros(cols, B.shape[1])
    for i, pc in enumerate(piv):
        X[pc] = R[i, cols:]
    return X


def solve(A: np.ndarray, B: np.ndarray, F: FqField) -> np.ndarray:
    """One solution ``X`` of ``X A = B``."""
    return solve_right(A.T.copy(), B.T.copy(), F).T.copy()


def inverse(A: np.ndarray, F: FqField) -> np.ndarray:
    n = A.shape[0]
    if n == 0:
        return zeros(0, 0)
    R, piv = rref(np.concatenate([A, identity(n)], axis=1), F)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return R[:, n:].copy()


def column_space(A: np.ndarray, F: FqField) -> np.ndarray:
    """Columns forming a basis of the image of ``A`` (as an n x k matrix)."""
    if A.size == 0:
        return zeros(A.shape[0], 0)
    R, piv = rref(A.T.copy(), F)
    return R[: len(piv)].T.copy()


def extend_to_basis(B: np.ndarray, n: int, F: FqField) -> np.ndarray:
    """Columns completing the independent columns ``B`` to a basis of F^n."""
    k = B.shape[1] if B.size else 0
    cur = B if k else zeros(n, 0)
    extra = []
    r = rank(cur, F) if k else 0
    for i in range(n):
        e = zeros(n, 1)
        e[i, 0] = 1
        trial = np.concatenate([cur, e], axis=1)
        if rank(trial, F) > r:
            cur = trial
            r += 1
            extra.append(e)
        if r == n:
            break
    if not extra:
        return zeros(n, 0)
    return np.concatenate(extra, axis=1)


# ---------------------------------------------------------------------------
# subspaces


def enumerate_subspaces(n: int, k: int, F: FqField) -> Iterator[np.ndarray]:
    """Each ``k``-dimensional subspace of F^n exactly once, as a k x n RREF."""
    if k < 0 or k > n:
        return
    if k == 0:
        yield zeros(0, n)
        return
    q = F.q
    for piv in itertools.combinations(range(n), k):
        slots = [(i, c) for i in range(k) for c in range(piv[i] + 1, n) if c not in piv]
        base = zeros(k, n)
        for i, c in enumerate(piv):
            base[i, c] = 1
        for vals in itertools.product(range(q), repeat=len(slots)):
            M = base.copy()
            for (i, c), x in zip(slots, vals):
                M[i, c] = x
            yield M


def count_subspaces(n: int, k: int, q: int) -> int:
    return gaussian_binomial(n, k, q)


# ---------------------------------------------------------------------------
# polynomials over F_q (coefficients low degree first)


@dataclass(frozen=True, order=True)
class Poly:
    """Monic polynomial over F_q; the empty tuple is the distinguished zero of Sigma_1."""

    coeffs: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    @property
    def degree(self) -> int:
        return 1 if self.is_zero else len(self.coeffs) - 1

    def sort_key(self):
        return (self.degree, 0 if self.is_zero else 1, tuple(reversed(self.coeffs)))

    def __str__(self) -> str:
        return poly_text(self)


ZERO_POLY = Poly(())


def poly_text(f: Poly) -> str:
    if f.is_zero:
        return "0"
    parts = []
    d = len(f.coeffs) - 1
    for i in range(d, -1, -1):
        c = f.coeffs[i]
        if c == 0:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"{c}*{mono}")
    return "+".join(parts)


def parse_poly(text: str) -> Poly:
    text = text.replace(" ", "")
    if text == "0":
        return ZERO_POLY
    terms: dict[int, int] = {}
    for term in text.split("+"):
        if "x" in term:
            if "*" in term:
                c, mono = term.split("*")
                c = int(c)
            else:
                c, mono = 1, term
            e = 1 if mono == "x" else int(mono.split("^")[1])
        else:
            c, e = int(term), 0
        terms[e] = terms.get(e, 0) + c
    d = max(terms)
    return Poly(tuple(terms.get(i, 0) for i in range(d + 1)))


def p_trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def p_mul(a: Sequence[int], b: Sequence[int], F: FqField) -> list[int]:
    if not a or not b:
        return []
    r = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    r[i + j] = F.s_add(r[i + j], F.s_mul(x, y))
    return p_trim(r)


def p_divmod(a: Sequence[int], b: Sequence[int], F: FqField) -> tuple[list[int], list[int]]:
    a = p_trim(list(a))
    b = p_trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = F.s_inv(b[-1])
    qt = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        c = F.s_mul(a[-1], inv)
        qt[k] = c
        for i, y in enumerate(b):
            a[i + k] = F.s_sub(a[i + k], F.s_mul(c, y))
        p_trim(a)
    return p_trim(qt), a


def monic_polys(d: int, F: FqField) -> Iterator[tuple[int, ...]]:
    for tail in itertools.product(range(F.q), repeat=d):
        yield tuple(tail) + (1,)


@lru_cache(maxsize=None)
def _irreducibles(d: int, F: FqField) -> tuple[Poly, ...]:
    reducible: set[tuple[int, ...]] = set()
    for k in range(1, d // 2 + 1):
        for g in _irreducibles(k, F):
            for h in monic_polys(d - k, F):
                reducible.add(tuple(p_mul(g.coeffs, h, F)))
    out = [Poly(f) for f in monic_polys(d, F) if f not in reducible]
    return tuple(sorted(out, key=Poly.sort_key))


def irreducible_polys(d: int, F: FqField, include_zero: bool = True) -> list[Poly]:
    """Monic irreducibles of degree ``d``; for ``d = 1`` the zero polynomial is appended."""
    if d < 1:
        raise ValueError("degree must be positive")
    out = list(_irreducibles(d, F))
    if d == 1 and include_zero:
        out.append(ZERO_POLY)
    return out


def sigma_sizes(l: int, F: FqField) -> int:
    """``sum_{d | l} d |Sigma_d|``."""
    return sum(d * len(irreducible_polys(d, F)) for d in range(1, l + 1) if l % d == 0)


def factor(f: Sequence[int], F: FqField) -> list[tuple[Poly, int]]:
    """Factor a monic polynomial into monic irreducibles with multiplicities."""
    f = p_trim(list(f))
    out: dict[Poly, int] = {}
    d = 1
    while len(f) - 1 >= 2 * d:
        for g in _irreducibles(d, F):
            while True:
                qt, r = p_divmod(f, g.coeffs, F)
                if r:
                    break
                out[g] = out.get(g, 0) + 1
                f = qt
        d += 1
    if len(f) > 1:
        g = Poly(tuple(f))
        out[g] = out.get(g, 0) + 1
    return sorted(out.items(), key=lambda t: t[0].sort_key())


# ---------------------------------------------------------------------------
# matrices attached to polynomials


def companion(f: Poly, F: FqField) -> np.ndarray:
    if f.is_zero:
        raise ValueError("the zero polynomial has no companion matrix")
    d = len(f.coeffs) - 1
    C = zeros(d, d)
    for i in range(d - 1):
        C[i, i + 1] = 1
    for j in range(d):
        C[d - 1, j] = F.s_neg(f.coeffs[j])
    return C


def block_companion(f: Poly, n: int, F: FqField) -> np.ndarray:
    """Block upper-bidiagonal matrix with companion blocks and identity superdiagonal."""
    if f.is_zero:
        raise ValueError("use jordan_nilpotent for the zero polynomial")
    C = companion(f, F)
    d = C.shape[0]
    M = zeros(d * n, d * n)
    for i in range(n):
        M[i * d : (i + 1) * d, i * d : (i + 1) * d] = C
        if i + 1 < n:
            M[i * d : (i + 1) * d, (i + 1) * d : (i + 2) * d] = identity(d)
    return M


def jordan_nilpotent(n: int) -> np.ndarray:
    J = zeros(n, n)
    for i in range(n - 1):
        J[i, i + 1] = 1
    return J


def poly_of_matrix(f: Sequence[int], A: np.ndarray, F: FqField) -> np.ndarray:
    n = A.shape[0]
    R = zeros(n, n)
    for c in reversed(list(f)):
        R = F.matmul(R, A)
        if c:
            R = F.add(R, F.mul(identity(n), c))
    return R


def charpoly(A: np.ndarray, F: FqField) -> list[int]:
    """Characteristic polynomial via Hessenberg reduction (low degree first)."""
    n = A.shape[0]
    H = [[int(x) for x in row] for row in A]
    add, sub, mul, inv = F.s_add, F.s_sub, F.s_mul, F.s_inv
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if H[i][m - 1]), None)
        if piv is None:
            continue
        if piv != m:
            H[m], H[piv] = H[piv], H[m]
            for row in H:
                row[m], row[piv] = row[piv], row[m]
        for i in range(m + 1, n):
            if H[i][m - 1]:
                u = mul(H[i][m - 1], inv(H[m][m - 1]))
                for j in range(n):
                    H[i][j] = sub(H[i][j], mul(u, H[m][j]))
                for j in range(n):
                    H[j][m] = add(H[j][m], mul(u, H[j][i]))
    polys: list[list[int]] = [[1]]
    for m in range(1, n + 1):
        pm = p_mul([F.s_neg(H[m - 1][m - 1]), 1], polys[m - 1], F)
        prod = 1
        for i in range(m - 1, 0, -1):
            prod = mul(prod, H[i][i - 1])
            c = mul(H[i - 1][m - 1], prod)
            if c:
                term = [mul(c, x) for x in polys[i - 1]]
                pm = p_trim([sub(pm[k] if k < len(pm) else 0, term[k] if k < len(term) else 0)
                             for k in range(max(len(pm), len(term)))])
        polys.append(pm)
    return polys[n]


def elementary_divisors(A: np.ndarray, F: FqField) -> list[tuple[Poly, int]]:
    """Sorted list of ``(phi, k)`` with one entry per block ``phi^k`` of the rational form."""
    n = A.shape[0]
    out = []
    for phi, mult in factor(charpoly(A, F), F):
        d = phi.degree
        P = poly_of_matrix(phi.coeffs, A, F)
        nullity = [0]
        Pk = identity(n)
        for k in range(1, mult + 1):
            Pk = F.matmul(Pk, P)
            nullity.append((n - rank(Pk, F)) // d)
        nullity.append(nullity[-1])
        # number of blocks of size >= k is nullity[k] - nullity[k-1]
        for k in range(1, mult + 1):
            ge_k = nullity[k] - nullity[k - 1]
            ge_k1 = nullity[k + 1] - nullity[k]
            out.extend([(phi, k)] * (ge_k - ge_k1))
    return sorted(out, key=lambda t: (t[0].sort_key(), t[1]))


def invariant_factors(A: np.ndarray, F: FqField) -> list[list[int]]:
    """Invariant factors ``f_1 | f_2 | ...`` of ``xI - A`` (non-unit ones)."""
    by_phi: dict[Poly, list[int]] = {}
    for phi, k in elementary_divisors(A, F):
        by_phi.setdefault(phi, []).append(k)
    length = max((len(v) for v in by_phi.values()), default=0)
    facs = [[1] for _ in range(length)]
    for phi, ks in by_phi.items():
        ks = sorted(ks)
        for i, k in enumerate(ks):
            slot = length - len(ks) + i
            for _ in range(k):
                facs[slot] = p_mul(facs[slot], list(phi.coeffs), F)
    return facs


def similar(A: np.ndarray, B: np.ndarray, F: FqField) -> bool:
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise ValueError("similar() needs square matrices of equal size")
    return invariant_factors(A, F) == invariant_factors(B, F)


def similar_bruteforce(A: np.ndarray, B: np.ndarray, F: FqField) -> bool:
    """Search GL_n(F_q) for a conjugating matrix; for tests only."""
    n = A.shape[0]
    for vals in itertools.product(range(F.q), repeat=n * n):
        g = np.array(vals, dtype=np.int64).reshape(n, n)
        if rank(g, F) < n:
            continue
        if np.array_equal(F.matmul(g, A), F.matmul(B, g)):
            return True
    return False


def count_jordan_completions(pi: Poly, a: int, b: int, F: FqField) -> int:
    """Number of ``da x db`` blocks making the block triangular matrix similar to ``M_pi(a+b)``."""
    d = pi.degree
    if a == 0 or b == 0:
        return 1
    target = block_companion(pi, a + b, F)
    A = zeros(d * (a + b), d * (a + b))
    A[: d * a, : d * a] = block_companion(pi, a, F)
    A[d * a :, d * a :] = block_companion(pi, b, F)
    count = 0
    for vals in itertools.product(range(F.q), repeat=d * a * d * b):
        A[: d * a, d * a :] = np.array(vals, dtype=np.int64).reshape(d * a, d * b)
        if similar(A, target, F):
            count += 1
    return count
