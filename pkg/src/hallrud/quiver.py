"""Representations of the Kronecker and Rudakov quivers.

A representation has spaces ``V1``, ``V2`` and maps ``e, f: V1 -> V2`` and
``ep, fp: V2 -> V1`` (the primed arrows) subject to

    e ep = ep e = f fp = fp f = 0,   e fp = - f ep,   ep f = - fp e.

Kronecker representations are the ones with ``ep = fp = 0``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from . import gf
from .gf import FqField, InconsistentSystem, Poly, zeros


class RelationError(ValueError):
    pass


class ClassificationError(RuntimeError):
    """Raised when the Hom fingerprint does not account for a module (a bug)."""


@dataclass(frozen=True, eq=False)
class QuiverRep:
    d1: int
    d2: int
    e: np.ndarray
    f: np.ndarray
    ep: np.ndarray
    fp: np.ndarray
    field: FqField

    def __post_init__(self):
        for name, shape in (("e", (self.d2, self.d1)), ("f", (self.d2, self.d1)),
                            ("ep", (self.d1, self.d2)), ("fp", (self.d1, self.d2))):
            m = getattr(self, name)
            if m.shape != shape:
                raise ValueError(f"{name} has shape {m.shape}, expected {shape}")

    @property
    def dim(self) -> tuple[int, int]:
        return (self.d1, self.d2)

    def key(self) -> tuple:
        return (self.field.q, self.d1, self.d2, self.e.tobytes(), self.f.tobytes(),
                self.ep.tobytes(), self.fp.tobytes())

    def maps(self) -> dict[str, np.ndarray]:
        return {"e": self.e, "f": self.f, "ep": self.ep, "fp": self.fp}

    def is_kronecker(self) -> bool:
        return not self.ep.any() and not self.fp.any()

    def to_json(self) -> dict:
        return {"q": self.field.q, "d": [self.d1, self.d2],
                "e": self.e.tolist(), "f": self.f.tolist(),
                "ep": self.ep.tolist(), "fp": self.fp.tolist()}

    def __repr__(self) -> str:
        return f"QuiverRep(q={self.field.q}, d=({self.d1},{self.d2}))"


def make_rep(F: FqField, d1: int, d2: int, e=None, f=None, ep=None, fp=None) -> QuiverRep:
    def m(x, r, c):
        if x is None:
            return zeros(r, c)
        a = np.array(x, dtype=np.int64)
        return a.reshape(r, c) if a.size else zeros(r, c)

    return QuiverRep(d1, d2, m(e, d2, d1), m(f, d2, d1), m(ep, d1, d2), m(fp, d1, d2), F)


def rep_from_json(data: dict) -> QuiverRep:
    F = gf.field(int(data["q"]))
    d1, d2 = data["d"]
    return make_rep(F, d1, d2, data.get("e"), data.get("f"), data.get("ep"), data.get("fp"))


def zero_rep(F: FqField) -> QuiverRep:
    return make_rep(F, 0, 0)


def kronecker_rep(F: FqField, e: np.ndarray, f: np.ndarray) -> QuiverRep:
    d2, d1 = e.shape
    return make_rep(F, d1, d2, e, f)


def relation_defects(R: QuiverRep) -> list[np.ndarray]:
    F, mm = R.field, R.field.matmul
    e, f, ep, fp = R.e, R.f, R.ep, R.fp
    return [mm(e, ep), mm(ep, e), mm(f, fp), mm(fp, f),
            F.add(mm(e, fp), mm(f, ep)), F.add(mm(ep, f), mm(fp, e))]


def check_relations(R: QuiverRep) -> bool:
    return all(not d.any() for d in relation_defects(R))


def direct_sum(reps: Sequence[QuiverRep], F: FqField | None = None) -> QuiverRep:
    reps = list(reps)
    if not reps:
        if F is None:
            raise ValueError("empty direct sum needs a field")
        return zero_rep(F)
    F = reps[0].field
    d1 = sum(r.d1 for r in reps)
    d2 = sum(r.d2 for r in reps)
    out = {k: None for k in ("e", "f", "ep", "fp")}
    e, f, ep, fp = zeros(d2, d1), zeros(d2, d1), zeros(d1, d2), zeros(d1, d2)
    o1 = o2 = 0
    for r in reps:
        e[o2:o2 + r.d2, o1:o1 + r.d1] = r.e
        f[o2:o2 + r.d2, o1:o1 + r.d1] = r.f
        ep[o1:o1 + r.d1, o2:o2 + r.d2] = r.ep
        fp[o1:o1 + r.d1, o2:o2 + r.d2] = r.fp
        o1 += r.d1
        o2 += r.d2
    del out
    return QuiverRep(d1, d2, e, f, ep, fp, F)


def sigma(R: QuiverRep) -> QuiverRep:
    """Swap the vertices, ``e <-> ep`` and ``f <-> fp``."""
    return QuiverRep(R.d2, R.d1, R.ep.copy(), R.fp.copy(), R.e.copy(), R.f.copy(), R.field)


def tau(R: QuiverRep) -> QuiverRep:
    """Vector-space dual: ``tau(e) = ep^T``, ``tau(f) = fp^T``, ``tau(ep) = e^T``, ``tau(fp) = f^T``."""
    return QuiverRep(R.d1, R.d2, R.ep.T.copy(), R.fp.T.copy(), R.e.T.copy(), R.f.T.copy(), R.field)


# ---------------------------------------------------------------------------
# linear systems in matrix unknowns


def _kron(A: np.ndarray, B: np.ndarray, F: FqField) -> np.ndarray:
    if F.prime:
        return np.kron(A, B) % F.p
    r = F.MUL[A[:, None, :, None], B[None, :, None, :]]
    return r.reshape(A.shape[0] * B.shape[0], A.shape[1] * B.shape[1])


def _left(A: np.ndarray, n: int, F: FqField) -> np.ndarray:
    """Matrix of ``g -> A g`` on row-major ``vec(g)`` with ``g`` having ``n`` columns."""
    return _kron(A, gf.identity(n), F)


def _right(B: np.ndarray, m: int, F: FqField) -> np.ndarray:
    """Matrix of ``g -> g B`` on row-major ``vec(g)`` with ``g`` having ``m`` rows."""
    return _kron(gf.identity(m), B.T.copy(), F)


def _hstack(blocks: list[np.ndarray], rows: int) -> np.ndarray:
    blocks = [b for b in blocks]
    return np.concatenate(blocks, axis=1) if blocks else zeros(rows, 0)


def _vstack(blocks: list[np.ndarray], cols: int) -> np.ndarray:
    blocks = [b for b in blocks if b.shape[0]]
    return np.concatenate(blocks, axis=0) if blocks else zeros(0, cols)


# ---------------------------------------------------------------------------
# Hom


@dataclass(frozen=True)
class Morphism:
    g1: np.ndarray
    g2: np.ndarray


def hom_system(X: QuiverRep, Y: QuiverRep) -> np.ndarray:
    """Linear constraints on ``(vec g1, vec g2)`` for ``g: X -> Y`` to intertwine."""
    F = X.field
    n1, n2 = Y.d1 * X.d1, Y.d2 * X.d2
    rows = []
    # arrows V1 -> V2: g2 a_X - a_Y g1 = 0
    for a in ("e", "f"):
        aX, aY = getattr(X, a), getattr(Y, a)
        if Y.d2 * X.d1 == 0:
            continue
        c2 = _right(aX, Y.d2, F)
        c1 = F.neg(_left(aY, X.d1, F))
        rows.append(np.concatenate([c1, c2], axis=1))
    for a in ("ep", "fp"):
        aX, aY = getattr(X, a), getattr(Y, a)
        if Y.d1 * X.d2 == 0:
            continue
        c1 = _right(aX, Y.d1, F)
        c2 = F.neg(_left(aY, X.d2, F))
        rows.append(np.concatenate([c1, c2], axis=1))
    return _vstack(rows, n1 + n2)


def hom_basis(X: QuiverRep, Y: QuiverRep) -> list[Morphism]:
    F = X.field
    n1 = Y.d1 * X.d1
    K = gf.kernel_basis(hom_system(X, Y), F)
    out = []
    for row in K:
        out.append(Morphism(row[:n1].reshape(Y.d1, X.d1).copy(), row[n1:].reshape(Y.d2, X.d2).copy()))
    return out


def hom_dim(X: QuiverRep, Y: QuiverRep) -> int:
    n = Y.d1 * X.d1 + Y.d2 * X.d2
    if n == 0:
        return 0
    A = hom_system(X, Y)
    return n - gf.rank(A, X.field)


def end_dim(Y: QuiverRep) -> int:
    return hom_dim(Y, Y)


def is_morphism(X: QuiverRep, Y: QuiverRep, g: Morphism) -> bool:
    F = X.field
    mm = F.matmul
    for a in ("e", "f"):
        if not np.array_equal(mm(g.g2, getattr(X, a)), mm(getattr(Y, a), g.g1)):
            return False
    for a in ("ep", "fp"):
        if not np.array_equal(mm(g.g1, getattr(X, a)), mm(getattr(Y, a), g.g2)):
            return False
    return True


# ---------------------------------------------------------------------------
# Ext^1


@dataclass(frozen=True)
class Cocycle:
    eta_e: np.ndarray   # X1 -> Y2
    eta_f: np.ndarray   # X1 -> Y2
    eta_ep: np.ndarray  # X2 -> Y1
    eta_fp: np.ndarray  # X2 -> Y1


@dataclass
class ExtSpace:
    X: QuiverRep
    Y: QuiverRep
    dim: int
    basis: list[Cocycle]          # representatives of a basis of Ext^1
    cocycle_dim: int
    coboundary_dim: int
    hom_dim: int


def _cocycle_layout(X: QuiverRep, Y: QuiverRep) -> tuple[int, int]:
    return Y.d2 * X.d1, Y.d1 * X.d2


def cocycle_system(X: QuiverRep, Y: QuiverRep) -> np.ndarray:
    """Linearized relations on ``(eta_e, eta_f, eta_ep, eta_fp)`` (row-major vec)."""
    F = X.field
    a, b = _cocycle_layout(X, Y)
    n = 2 * a + 2 * b
    Z2 = lambda r: zeros(r, a)  # noqa: E731
    Z1 = lambda r: zeros(r, b)  # noqa: E731
    rows = []
    # e_Y eta_ep + eta_e ep_X = 0   (d2Y x d2X)
    r = Y.d2 * X.d2
    if r:
        rows.append(np.concatenate([_right(X.ep, Y.d2, F), Z2(r), _left(Y.e, X.d2, F), Z1(r)], axis=1))
        # f_Y eta_fp + eta_f fp_X = 0
        rows.append(np.concatenate([Z2(r), _right(X.fp, Y.d2, F), Z1(r), _left(Y.f, X.d2, F)], axis=1))
        # e_Y eta_fp + eta_e fp_X + f_Y eta_ep + eta_f ep_X = 0
        rows.append(np.concatenate([_right(X.fp, Y.d2, F), _right(X.ep, Y.d2, F),
                                    _left(Y.f, X.d2, F), _left(Y.e, X.d2, F)], axis=1))
    r = Y.d1 * X.d1
    if r:
        # ep_Y eta_e + eta_ep e_X = 0   (d1Y x d1X)
        rows.append(np.concatenate([_left(Y.ep, X.d1, F), Z2(r), _right(X.e, Y.d1, F), Z1(r)], axis=1))
        # fp_Y eta_f + eta_fp f_X = 0
        rows.append(np.concatenate([Z2(r), _left(Y.fp, X.d1, F), Z1(r), _right(X.f, Y.d1, F)], axis=1))
        # ep_Y eta_f + eta_ep f_X + fp_Y eta_e + eta_fp e_X = 0
        rows.append(np.concatenate([_left(Y.fp, X.d1, F), _left(Y.ep, X.d1, F),
                                    _right(X.f, Y.d1, F), _right(X.e, Y.d1, F)], axis=1))
    return _vstack(rows, n)


def coboundary_matrix(X: QuiverRep, Y: QuiverRep) -> np.ndarray:
    """Columns: images of a basis of ``(g1, g2)`` under ``eta_a = g_t a_X - a_Y g_s``."""
    F = X.field
    a, b = _cocycle_layout(X, Y)
    m1, m2 = Y.d1 * X.d1, Y.d2 * X.d2
    blocks = []
    # eta_e, eta_f: g2 a_X - a_Y g1
    for arrow in ("e", "f"):
        aX, aY = getattr(X, arrow), getattr(Y, arrow)
        blocks.append(np.concatenate([F.neg(_left(aY, X.d1, F)), _right(aX, Y.d2, F)], axis=1)
                      if a else zeros(0, m1 + m2))
    for arrow in ("ep", "fp"):
        aX, aY = getattr(X, arrow), getattr(Y, arrow)
        blocks.append(np.concatenate([_right(aX, Y.d1, F), F.neg(_left(aY, X.d2, F))], axis=1)
                      if b else zeros(0, m1 + m2))
    return _vstack(blocks, m1 + m2)


def _unpack_cocycle(vec: np.ndarray, X: QuiverRep, Y: QuiverRep) -> Cocycle:
    a, b = _cocycle_layout(X, Y)
    return Cocycle(vec[:a].reshape(Y.d2, X.d1).copy(), vec[a:2 * a].reshape(Y.d2, X.d1).copy(),
                   vec[2 * a:2 * a + b].reshape(Y.d1, X.d2).copy(),
                   vec[2 * a + b:].reshape(Y.d1, X.d2).copy())


def cocycle_vector(c: Cocycle) -> np.ndarray:
    return np.concatenate([c.eta_e.ravel(), c.eta_f.ravel(), c.eta_ep.ravel(), c.eta_fp.ravel()])


def ext1_space(X: QuiverRep, Y: QuiverRep) -> ExtSpace:
    """``Ext^1(X, Y)``: classes of extensions ``0 -> Y -> E -> X -> 0``."""
    F = X.field
    a, b = _cocycle_layout(X, Y)
    n = 2 * a + 2 * b
    if n == 0:
        return ExtSpace(X, Y, 0, [], 0, 0, hom_dim(X, Y))
    Zb = gf.kernel_basis(cocycle_system(X, Y), F) if n else zeros(0, 0)
    Bm = coboundary_matrix(X, Y)
    Bspan = gf.rref(Bm.T.copy(), F)
    bdim = len(Bspan[1])
    Bbasis = Bspan[0][:bdim]
    # extend the coboundary basis inside the cocycle space
    cur = Bbasis
    r = bdim
    reps = []
    for z in Zb:
        trial = np.concatenate([cur, z[None, :]], axis=0)
        if gf.rank(trial, F) > r:
            cur = trial
            r += 1
            reps.append(z)
    m = Y.d1 * X.d1 + Y.d2 * X.d2
    return ExtSpace(X, Y, len(reps), [_unpack_cocycle(z, X, Y) for z in reps],
                    Zb.shape[0], bdim, m - bdim)


def ext_dim(X: QuiverRep, Y: QuiverRep) -> int:
    return ext1_space(X, Y).dim


def is_cocycle(X: QuiverRep, Y: QuiverRep, c: Cocycle) -> bool:
    A = cocycle_system(X, Y)
    if A.shape[0] == 0:
        return True
    return not X.field.matmul(A, cocycle_vector(c)[:, None]).any()


def middle_term(X: QuiverRep, Y: QuiverRep, c: Cocycle | None = None, check: bool = True) -> QuiverRep:
    """Extension ``E`` with ``Y`` the submodule on the first coordinates and ``E/Y = X``."""
    F = X.field
    if c is None:
        c = Cocycle(zeros(Y.d2, X.d1), zeros(Y.d2, X.d1), zeros(Y.d1, X.d2), zeros(Y.d1, X.d2))
    elif check and not is_cocycle(X, Y, c):
        raise RelationError("cocycle constraints violated")
    d1, d2 = Y.d1 + X.d1, Y.d2 + X.d2

    def block(aY, eta, aX, r, cc):
        M = zeros(r, cc)
        M[: aY.shape[0], : aY.shape[1]] = aY
        M[: aY.shape[0], aY.shape[1]:] = eta
        M[aY.shape[0]:, aY.shape[1]:] = aX
        return M

    return QuiverRep(d1, d2, block(Y.e, c.eta_e, X.e, d2, d1), block(Y.f, c.eta_f, X.f, d2, d1),
                     block(Y.ep, c.eta_ep, X.ep, d1, d2), block(Y.fp, c.eta_fp, X.fp, d1, d2), F)


def ext_elements(space: ExtSpace) -> Iterator[Cocycle]:
    """All ``q^dim`` elements of ``Ext^1`` as cocycle representatives."""
    F = space.X.field
    if space.dim == 0:
        X, Y = space.X, space.Y
        yield Cocycle(zeros(Y.d2, X.d1), zeros(Y.d2, X.d1), zeros(Y.d1, X.d2), zeros(Y.d1, X.d2))
        return
    vecs = np.array([cocycle_vector(c) for c in space.basis], dtype=np.int64)
    for coeffs in itertools.product(range(F.q), repeat=space.dim):
        cv = np.array(coeffs, dtype=np.int64)[None, :]
        yield _unpack_cocycle(F.matmul(cv, vecs)[0], space.X, space.Y)


# ---------------------------------------------------------------------------
# sub- and quotient representations


def restrict(X: QuiverRep, B1: np.ndarray, B2: np.ndarray) -> QuiverRep:
    """Subrepresentation on the column spans of ``B1`` (in V1) and ``B2`` (in V2)."""
    F = X.field
    k1, k2 = B1.shape[1], B2.shape[1]
    mm = F.matmul

    def induced(A, src, dst):
        if src.shape[1] == 0 or dst.shape[1] == 0:
            if src.shape[1] and mm(A, src).any():
                raise InconsistentSystem("subspace is not invariant")
            return zeros(dst.shape[1], src.shape[1])
        return gf.solve_right(dst, mm(A, src), F)

    return QuiverRep(k1, k2, induced(X.e, B1, B2), induced(X.f, B1, B2),
                     induced(X.ep, B2, B1), induced(X.fp, B2, B1), F)


def quotient(X: QuiverRep, B1: np.ndarray, B2: np.ndarray) -> QuiverRep:
    """``X / U`` for the invariant subspace pair ``U`` spanned by the columns of ``B1``, ``B2``."""
    F = X.field
    C1 = gf.extend_to_basis(B1, X.d1, F)
    C2 = gf.extend_to_basis(B2, X.d2, F)
    k1, k2 = B1.shape[1], B2.shape[1]
    T1 = gf.inverse(np.concatenate([B1, C1], axis=1), F) if X.d1 else zeros(0, 0)
    T2 = gf.inverse(np.concatenate([B2, C2], axis=1), F) if X.d2 else zeros(0, 0)
    mm = F.matmul

    def induced(A, C_src, T_dst, k_dst):
        if C_src.shape[1] == 0 or T_dst.shape[0] - k_dst == 0:
            return zeros(T_dst.shape[0] - k_dst, C_src.shape[1])
        return mm(T_dst, mm(A, C_src))[k_dst:]

    return QuiverRep(X.d1 - k1, X.d2 - k2, induced(X.e, C1, T2, k2), induced(X.f, C1, T2, k2),
                     induced(X.ep, C2, T1, k1), induced(X.fp, C2, T1, k1), F)


def submodules(X: QuiverRep, k1: int, k2: int) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """All subrepresentations of dimension ``(k1, k2)`` as column-basis pairs."""
    F = X.field
    mm = F.matmul
    for U1r in gf.enumerate_subspaces(X.d1, k1, F):
        U1 = U1r.T.copy()
        if k1:
            W = gf.column_space(np.concatenate([mm(X.e, U1), mm(X.f, U1)], axis=1), F)
        else:
            W = zeros(X.d2, 0)
        w = W.shape[1]
        if w > k2:
            continue
        # subspaces of V2 containing W: lift subspaces of a complement
        C = gf.extend_to_basis(W, X.d2, F)
        for S in gf.enumerate_subspaces(C.shape[1], k2 - w, F):
            U2 = np.concatenate([W, mm(C, S.T.copy())], axis=1) if S.shape[0] else W
            if k2 and k1 < X.d1:
                img = np.concatenate([mm(X.ep, U2), mm(X.fp, U2)], axis=1)
                if k1:
                    if gf.rank(np.concatenate([U1, img], axis=1), F) > k1:
                        continue
                elif img.any():
                    continue
            yield U1, U2


# ---------------------------------------------------------------------------
# automorphisms


def aut_count_bruteforce(Y: QuiverRep) -> int:
    F = Y.field
    basis = hom_basis(Y, Y)
    if not basis:
        return 1
    g1s = np.array([b.g1 for b in basis])
    g2s = np.array([b.g2 for b in basis])
    count = 0
    for coeffs in itertools.product(range(F.q), repeat=len(basis)):
        c = np.array(coeffs, dtype=np.int64)
        g1 = F.matmul(c[None, :], g1s.reshape(len(basis), -1))[0].reshape(Y.d1, Y.d1)
        g2 = F.matmul(c[None, :], g2s.reshape(len(basis), -1))[0].reshape(Y.d2, Y.d2)
        if gf.rank(g1, F) == Y.d1 and gf.rank(g2, F) == Y.d2:
            count += 1
    return count


def aut_count_formula(labels, q: int, end_dimension: int) -> int:
    """``q^c prod_i prod_{j<=m_i} (1 - q_i^{-j})`` from a Krull-Schmidt decomposition."""
    mult: dict = {}
    for L in labels:
        mult[L] = mult.get(L, 0) + 1
    val = Fraction(q) ** end_dimension
    for L, m in mult.items():
        qi = Fraction(q) ** L.top_degree
        for j in range(1, m + 1):
            val *= 1 - qi ** (-j)
    if val.denominator != 1:
        raise ArithmeticError("automorphism count is not an integer")
    return int(val)


BRUTE_AUT_LIMIT = 4096


def aut_count(Y: QuiverRep, method: str = "auto") -> int:
    c = end_dim(Y)
    if method == "brute" or (method == "auto" and Y.field.q ** c <= BRUTE_AUT_LIMIT):
        return aut_count_bruteforce(Y)
    return aut_count_formula(decompose(Y), Y.field.q, c)


# ---------------------------------------------------------------------------
# decomposition


_DECOMP_CACHE: dict = {}


def _independent_hom_into_M(X: QuiverRep, iota1: np.ndarray, iota2: np.ndarray, target: QuiverRep):
    """A morphism ``r: X -> target`` with ``r o iota = id`` (``target`` 4-dimensional)."""
    F = X.field
    basis = hom_basis(X, target)
    # unknown coefficients c_k:  sum c_k (g1_k iota1 , g2_k iota2) = (I, I)
    cols = []
    for b in basis:
        cols.append(np.concatenate([F.matmul(b.g1, iota1).ravel(), F.matmul(b.g2, iota2).ravel()]))
    A = np.array(cols, dtype=np.int64).T
    rhs = np.concatenate([gf.identity(target.d1).ravel(), gf.identity(target.d2).ravel()])
    c = gf.solve_right(A, rhs, F)[:, 0]
    g1 = zeros(target.d1, X.d1)
    g2 = zeros(target.d2, X.d2)
    for ck, b in zip(c, basis):
        if ck:
            g1 = F.add(g1, F.mul(b.g1, int(ck)))
            g2 = F.add(g2, F.mul(b.g2, int(ck)))
    return g1, g2


def _split_projective(X: QuiverRep, which: str):
    """Split off one copy of M (``which='M'``) or M' and return the complement."""
    from .catalog import rep_of_label, LABEL_M, LABEL_MP

    F = X.field
    mm = F.matmul
    if which == "M":
        comp = mm(X.fp, X.e)  # V1 -> V1
        j = int(np.nonzero(comp.any(axis=0))[0][0])
        x = zeros(X.d1, 1)
        x[j, 0] = 1
        x2 = F.neg(mm(comp, x))
        iota1 = np.concatenate([x, x2], axis=1)
        iota2 = np.concatenate([mm(X.e, x), mm(X.f, x)], axis=1)
        target = rep_of_label(LABEL_M, F)
    else:
        comp = mm(X.e, X.fp)  # V2 -> V2
        j = int(np.nonzero(comp.any(axis=0))[0][0])
        y = zeros(X.d2, 1)
        y[j, 0] = 1
        iota1 = np.concatenate([mm(X.ep, y), F.neg(mm(X.fp, y))], axis=1)
        iota2 = np.concatenate([y, F.neg(mm(comp, y))], axis=1)
        target = rep_of_label(LABEL_MP, F)
    g1, g2 = _independent_hom_into_M(X, iota1, iota2, target)
    K1 = gf.kernel_basis(g1, F).T.copy()
    K2 = gf.kernel_basis(g2, F).T.copy()
    return restrict(X, K1, K2)


def _chain_dims(L: np.ndarray, T: np.ndarray, start_free: bool, steps: int, F: FqField) -> list[int]:
    """Dimensions of the solution spaces of ``L x_j = T x_{j-1}`` for ``j = 1..steps``.

    With ``start_free`` the first vector is unconstrained; otherwise ``L x_1 = 0``.
    """
    m = L.shape[1]
    dims = []
    if start_free:
        lam = gf.identity(m)
        dims.append(m)
    else:
        lam = zeros(m, 0)
    while len(dims) < steps:
        A = np.concatenate([L, F.neg(F.matmul(T, lam))], axis=1)
        if A.shape[0] == 0:
            K = gf.identity(A.shape[1])
        else:
            K = gf.kernel_basis(A, F)
        dims.append(K.shape[0])
        lam = K[:, :m].T.copy()
        if K.shape[0] == 0:
            dims += [0] * (steps - len(dims))
            break
    return dims


def _preprojective_mults(e: np.ndarray, f: np.ndarray, F: FqField) -> dict[int, int]:
    """Multiplicities of ``P_n`` from ``h(n) = dim Hom(P_n, X)``."""
    d2, d1 = e.shape
    top = min(d1, d2 - 1)
    if top < 0:
        return {}
    # h(n) for n = 0 .. top + 2
    h = [d2] + (_chain_dims(e, f, True, top + 2, F) if d1 else [0] * (top + 2))
    out = {}
    for n in range(top + 1):
        m = h[n] - 2 * h[n + 1] + h[n + 2]
        if m:
            out[n] = m
    return out


def _regular_hom_dims(phi: Poly, kmax: int, e: np.ndarray, f: np.ndarray, F: FqField) -> list[int]:
    """``dim Hom(R_phi(k), X)`` for ``k = 1..kmax``."""
    if phi.is_zero:
        return _chain_dims(e, f, False, kmax, F)
    d = phi.degree
    C = gf.companion(phi, F)
    Id = gf.identity(d)
    L = F.sub(_kron(f, Id, F), _kron(e, C.T.copy(), F))
    T = _kron(e, Id, F)
    return _chain_dims(L, T, False, kmax, F)


def kronecker_classify(e: np.ndarray, f: np.ndarray, F: FqField) -> list:
    """Indecomposable summands of the Kronecker representation ``(e, f)``."""
    from .catalog import Label

    e = np.asarray(e, dtype=np.int64)
    f = np.asarray(f, dtype=np.int64)
    d2, d1 = e.shape
    labels: list = []
    pmult = _preprojective_mults(e, f, F)
    imult = _preprojective_mults(e.T.copy(), f.T.copy(), F)
    for n, m in sorted(pmult.items()):
        if m < 0:
            raise ClassificationError("negative multiplicity")
        labels += [Label("P", n)] * m
    for n, m in sorted(imult.items()):
        if m < 0:
            raise ClassificationError("negative multiplicity")
        labels += [Label("I", n)] * m
    n_inj = sum(imult.values())
    r = d1 - sum(n * m for n, m in pmult.items()) - sum((n + 1) * m for n, m in imult.items())
    r2 = d2 - sum((n + 1) * m for n, m in pmult.items()) - sum(n * m for n, m in imult.items())
    if r < 0 or r != r2:
        raise ClassificationError("preprojective/preinjective counts inconsistent")
    remaining = r
    d = 1
    while remaining > 0 and d <= remaining:
        for phi in gf.irreducible_polys(d, F):
            if remaining < d:
                break
            kmax = remaining // d
            first = _regular_hom_dims(phi, 1, e, f, F)[0] - d * n_inj
            if first == 0:
                continue
            raw = _regular_hom_dims(phi, kmax + 1, e, f, F)
            hp = [0] + [x - d * k * n_inj for k, x in enumerate(raw, start=1)]
            for k in range(1, kmax + 1):
                num = 2 * hp[k] - hp[k + 1] - hp[k - 1]
                if num % d:
                    raise ClassificationError("regular multiplicity not integral")
                m = num // d
                if m < 0:
                    raise ClassificationError("negative regular multiplicity")
                labels += [Label("R", k, phi)] * m
                remaining -= m * k * d
        d += 1
    if remaining != 0:
        raise ClassificationError("regular part not accounted for")
    return labels


def _split_halves(X: QuiverRep) -> tuple[QuiverRep, QuiverRep]:
    """``X = V + W`` with ``e' = f' = 0`` on ``V`` and ``e = f = 0`` on ``W`` (no M, M' summands)."""
    F = X.field
    K = gf.kernel_basis(np.concatenate([X.e, X.f], axis=0), F).T.copy()  # ker e & ker f
    X1c = gf.extend_to_basis(K, X.d1, F)
    Im = gf.column_space(np.concatenate([X.e, X.f], axis=1), F)          # Im e + Im f
    X2c = gf.extend_to_basis(Im, X.d2, F)
    return restrict(X, X1c, Im), restrict(X, K, X2c)


def decompose(Y: QuiverRep, check: bool = False) -> list:
    """Krull-Schmidt decomposition as a sorted list of labels."""
    from .catalog import LABEL_M, LABEL_MP, sort_labels

    if check and not check_relations(Y):
        raise RelationError("representation violates the Rudakov relations")
    key = Y.key()
    hit = _DECOMP_CACHE.get(key)
    if hit is not None:
        return list(hit)
    F = Y.field
    labels: list = []
    X = Y
    while X.d1 and X.d2 and F.matmul(X.fp, X.e).any():
        X = _split_projective(X, "M")
        labels.append(LABEL_M)
    while X.d1 and X.d2 and F.matmul(X.e, X.fp).any():
        X = _split_projective(X, "Mp")
        labels.append(LABEL_MP)
    if X.d1 + X.d2:
        if not X.ep.any() and not X.fp.any():
            labels += kronecker_classify(X.e, X.f, F)
        elif not X.e.any() and not X.f.any():
            labels += [L.sigma() for L in kronecker_classify(X.ep, X.fp, F)]
        else:
            V, W = _split_halves(X)
            if V.d1 + V.d2:
                labels += kronecker_classify(V.e, V.f, F)
            if W.d1 + W.d2:
                labels += [L.sigma() for L in kronecker_classify(W.ep, W.fp, F)]
    labels = sort_labels(labels)
    dims = (sum(L.dim[0] for L in labels), sum(L.dim[1] for L in labels))
    if dims != Y.dim:
        raise ClassificationError(f"decomposition has dimension {dims}, expected {Y.dim}")
    _DECOMP_CACHE[key] = tuple(labels)
    return labels
