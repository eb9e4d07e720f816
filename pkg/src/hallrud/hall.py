"""The Hall algebra of Rudakov-quiver representations and its localization.

Structure constants ``c^E_{X,Y}`` count subrepresentations ``E' <= E`` with
``E' ~ Y`` and ``E/E' ~ X``, so ``[X][Y] = sum_E c^E_{X,Y} [E]``.  Two oracles
compute them: direct subspace enumeration, and the extension count
``|Ext^1(X,Y)_E| alpha(E) / (alpha(X) alpha(Y) |Hom(X,Y)|)``.

The localization adjoins central ``a``, ``a'`` with ``a^4 = (q-1)[M]`` and
``a'^4 = (q-1)[M']``.  Localized keys are ``(Z, i, j)`` standing for
``a^i a'^j [Z]`` with ``Z`` free of ``M`` and ``M'`` summands.
"""

from __future__ import annotations

import atexit
import contextlib
import itertools
import json
import os
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

import numpy as np

from . import gf
from .catalog import (
    LABEL_M, LABEL_MP, IsoClass, Label, ZERO_CLASS, aut_count_class, classify, enumerate_isoclasses,
    end_dim_class, hom_dim_classes, parse_isoclass, rep_of_class,
)
from .quiver import (
    Cocycle, _unpack_cocycle, cocycle_vector, direct_sum, ext1_space, ext_elements, middle_term, quotient,
    restrict, submodules,
)
from .scalars import PrimePower, QScalar, gl_order, parse_qscalar, qscalar_text

SCHEMA_VERSION = 1


class ResourceBoundError(RuntimeError):
    """The requested computation exceeds the configured dimension bound."""


class FieldMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# dimension bound

DEFAULT_BOUND = (4, 4)
_bound = [DEFAULT_BOUND]


def current_bound() -> tuple[int, int]:
    return _bound[-1]


@contextlib.contextmanager
def dimension_bound(bound: tuple[int, int]):
    _bound.append(tuple(bound))
    try:
        yield
    finally:
        _bound.pop()


def _check_bound(d: tuple[int, int]) -> None:
    b = current_bound()
    if d[0] > b[0] or d[1] > b[1]:
        raise ResourceBoundError(f"dimension {d} exceeds bound {b}")


def ctx_of(q: int | PrimePower) -> PrimePower:
    return q if isinstance(q, PrimePower) else PrimePower.from_q(q)


# ---------------------------------------------------------------------------
# structure constants


def hall_number_subspace(E: IsoClass, X: IsoClass, Y: IsoClass, q: int) -> int:
    """Number of subrepresentations of ``E`` isomorphic to ``Y`` with quotient ``X``."""
    if (X.dim[0] + Y.dim[0], X.dim[1] + Y.dim[1]) != E.dim:
        raise ValueError("dimension mismatch")
    F = gf.field(q)
    R = rep_of_class(E, F)
    count = 0
    for B1, B2 in submodules(R, *Y.dim):
        if classify(restrict(R, B1, B2)) != Y:
            continue
        if classify(quotient(R, B1, B2)) == X:
            count += 1
    return count


def _ext_class_counts_projective(X: IsoClass, Y: IsoClass, q: int) -> dict[IsoClass, int]:
    """``|Ext^1(X, Y)_E|`` by classifying one cocycle per projective point."""
    F = gf.field(q)
    RX, RY = rep_of_class(X, F), rep_of_class(Y, F)
    space = ext1_space(RX, RY)
    counts: dict[IsoClass, int] = {X + Y: 1}
    # scaling a cocycle by a unit gives an isomorphic middle term, so only
    # one representative per projective point is classified
    for c in _projective_points(space):
        E = classify(middle_term(RX, RY, c, check=False))
        counts[E] = counts.get(E, 0) + (q - 1)
    return counts


def _projective_points(space):
    F = space.X.field
    vecs = np.array([cocycle_vector(c) for c in space.basis], dtype=np.int64)
    for v in _projective_vectors(vecs, F):
        yield _unpack_cocycle(v, space.X, space.Y)


def _projective_vectors(vecs: np.ndarray, F) -> Iterator[np.ndarray]:
    """One nonzero combination of the rows of ``vecs`` per line through the origin."""
    n = vecs.shape[0]
    for lead in range(n):
        for tail in itertools.product(range(F.q), repeat=n - lead - 1):
            cv = np.array([0] * lead + [1] + list(tail), dtype=np.int64)[None, :]
            yield F.matmul(cv, vecs)[0]


def _surjections(a: int, r: int, q: int) -> int:
    """Number of ``r x a`` matrices of rank ``r``, i.e. surjections ``F^a -> F^r``."""
    out = 1
    for i in range(r):
        out *= q ** a - q ** i
    return out


def _point_count(n: int, q: int) -> int:
    return (q ** n - 1) // (q - 1)


def _isotypic_plan(X: IsoClass, Y: IsoClass, q: int, F):
    """Pick an isotypic summand ``S^a`` of ``X`` or ``Y`` with ``End(S) = F_q``.

    ``Aut(S^a) = GL_a`` acts on ``Ext^1(S, Y)^a`` (or ``Ext^1(X, S)^a``) by
    mixing the ``a`` components, and the orbits are the row spans.  Returns
    ``(side, S, a, rest)`` for the split that classifies the fewest middle
    terms, or ``None`` when no split beats plain projective points.
    """
    from .quiver import ext_dim

    RX, RY = rep_of_class(X, F), rep_of_class(Y, F)
    best_cost = _point_count(ext_dim(RX, RY), q)
    best = None
    for side, own, other in (("X", X, RY), ("Y", Y, RX)):
        for L in sorted(set(own.labels), key=lambda L: L.sort_key()):
            a = own.count(L)
            if a < 2 or end_dim_class(IsoClass([L])) != 1:
                continue
            S, rest = IsoClass([L]), own.without(L, a)
            RS, Rr = rep_of_class(S, F), rep_of_class(rest, F)
            n = ext_dim(RS, other) if side == "X" else ext_dim(other, RS)
            m = ext_dim(Rr, other) if side == "X" else ext_dim(other, Rr)
            subspaces = sum(gf.count_subspaces(n, r, q) for r in range(min(a, n) + 1))
            cost = subspaces * (_point_count(m, q) + 1)
            if cost < best_cost:
                best_cost, best = cost, (side, S, a, rest)
    return best


def _ext_class_counts(X: IsoClass, Y: IsoClass, q: int) -> dict[IsoClass, int]:
    """``|Ext^1(X, Y)_E|`` for every middle term ``E``.

    Uses the ``GL_a`` symmetry of an isotypic summand when one pays off, and
    falls back to projective points otherwise.
    """
    F = gf.field(q)
    plan = _isotypic_plan(X, Y, q, F)
    if plan is None:
        return _ext_class_counts_projective(X, Y, q)
    side, S, a, rest = plan
    RS, Rr = rep_of_class(S, F), rep_of_class(rest, F)
    if side == "X":
        RX, RY = direct_sum([RS] * a + [Rr], F), rep_of_class(Y, F)
        sp_S, sp_r = ext1_space(RS, RY), ext1_space(Rr, RY)
        slots = [(i * RS.d1, i * RS.d2, 0, 0) for i in range(a)]
        rest_slot = (a * RS.d1, a * RS.d2, 0, 0)
    else:
        RX, RY = rep_of_class(X, F), direct_sum([RS] * a + [Rr], F)
        sp_S, sp_r = ext1_space(RX, RS), ext1_space(RX, Rr)
        slots = [(0, 0, i * RS.d1, i * RS.d2) for i in range(a)]
        rest_slot = (0, 0, a * RS.d1, a * RS.d2)
    n = sp_S.dim
    zS = _basis_matrix(sp_S)
    zr = _basis_matrix(sp_r)
    rest_points = [(None, 1)] + [(v, q - 1) for v in _projective_vectors(zr, F)] if sp_r.dim else [(None, 1)]

    def assemble(rows: np.ndarray, w) -> Cocycle:
        parts = [(_unpack_cocycle(rows[i], sp_S.X, sp_S.Y), slots[i]) for i in range(rows.shape[0])]
        if w is not None:
            parts.append((_unpack_cocycle(w, sp_r.X, sp_r.Y), rest_slot))
        return _place_cocycles(parts, RX, RY)

    counts: dict[IsoClass, int] = {}
    for r in range(min(a, n) + 1):
        weight = _surjections(a, r, q)
        for U in gf.enumerate_subspaces(n, r, F):
            rows = F.matmul(U, zS) if r else np.zeros((0, zS.shape[1]), dtype=np.int64)
            for w, mult in rest_points:
                if r == 0 and w is None:
                    E = X + Y
                else:
                    E = classify(middle_term(RX, RY, assemble(rows, w), check=False))
                counts[E] = counts.get(E, 0) + weight * mult
    return counts


def _basis_matrix(space) -> np.ndarray:
    X, Y = space.X, space.Y
    length = 2 * (Y.d2 * X.d1 + Y.d1 * X.d2)
    rows = [cocycle_vector(c) for c in space.basis]
    return np.array(rows, dtype=np.int64).reshape(len(rows), length)


def _place_cocycles(parts, RX, RY) -> Cocycle:
    """Sum of cocycles of summands, each placed at ``(x1, x2, y1, y2)`` offsets."""
    eta = {"e": np.zeros((RY.d2, RX.d1), dtype=np.int64), "f": np.zeros((RY.d2, RX.d1), dtype=np.int64),
           "ep": np.zeros((RY.d1, RX.d2), dtype=np.int64), "fp": np.zeros((RY.d1, RX.d2), dtype=np.int64)}
    for c, (x1, x2, y1, y2) in parts:
        for k, off_r, off_c in (("e", y2, x1), ("f", y2, x1), ("ep", y1, x2), ("fp", y1, x2)):
            blk = getattr(c, "eta_" + k)
            eta[k][off_r:off_r + blk.shape[0], off_c:off_c + blk.shape[1]] = blk
    return Cocycle(eta["e"], eta["f"], eta["ep"], eta["fp"])


def hall_number_extension(E: IsoClass, X: IsoClass, Y: IsoClass, q: int) -> int:
    """Same count as :func:`hall_number_subspace`, via extension classes."""
    if (X.dim[0] + Y.dim[0], X.dim[1] + Y.dim[1]) != E.dim:
        raise ValueError("dimension mismatch")
    counts = _ext_class_counts(X, Y, q)
    n = counts.get(E, 0)
    if not n:
        return 0
    return _unrescale(n, E, X, Y, q)


def _unrescale(n: int, E: IsoClass, X: IsoClass, Y: IsoClass, q: int) -> int:
    val = Fraction(n * aut_count_class(E, q),
                   aut_count_class(X, q) * aut_count_class(Y, q) * q ** hom_dim_classes(X, Y))
    if val.denominator != 1:
        raise ArithmeticError(f"non-integral Hall number for {E} <- {X}, {Y}")
    return int(val)


def hall_number_extension_bruteforce(E: IsoClass, X: IsoClass, Y: IsoClass, q: int) -> int:
    """Extension oracle enumerating every element of ``Ext^1`` (no projective shortcut)."""
    F = gf.field(q)
    RX, RY = rep_of_class(X, F), rep_of_class(Y, F)
    n = sum(1 for c in ext_elements(ext1_space(RX, RY)) if classify(middle_term(RX, RY, c, False)) == E)
    return _unrescale(n, E, X, Y, q) if n else 0


_PROD_CACHE: dict = {}
_DISK: dict = {"loaded": set(), "dirty": False}


def _cache_dir() -> str | None:
    return os.environ.get("HALLQ_CACHE_DIR") or None


def _disk_path(q: int) -> str:
    return os.path.join(_cache_dir(), f"hallq-v{SCHEMA_VERSION}-q{q}.json")


def _load_disk(q: int) -> None:
    if _cache_dir() is None or q in _DISK["loaded"]:
        return
    _DISK["loaded"].add(q)
    path = _disk_path(q)
    if not os.path.exists(path):
        return
    with open(path) as fh:
        data = json.load(fh)
    for k, v in data.items():
        xs, ys = k.split("|")
        _PROD_CACHE[(q, parse_isoclass(xs), parse_isoclass(ys))] = {
            parse_isoclass(e): c for e, c in v.items()}


def flush_disk_cache() -> None:
    d = _cache_dir()
    if d is None or not _DISK["dirty"]:
        return
    os.makedirs(d, exist_ok=True)
    by_q: dict = {}
    for (q, X, Y), v in _PROD_CACHE.items():
        by_q.setdefault(q, {})[f"{X}|{Y}"] = {str(e): c for e, c in sorted(v.items(), key=lambda t: t[0].sort_key())}
    for q, data in by_q.items():
        with open(_disk_path(q), "w") as fh:
            json.dump(data, fh, sort_keys=True)
    _DISK["dirty"] = False


atexit.register(flush_disk_cache)


def product_classes(X: IsoClass, Y: IsoClass, q: int) -> dict[IsoClass, int]:
    """``[X][Y]`` as ``{E: c^E_{X,Y}}``."""
    if X.is_zero:
        return {Y: 1}
    if Y.is_zero:
        return {X: 1}
    _check_bound((X.dim[0] + Y.dim[0], X.dim[1] + Y.dim[1]))
    key = (q, X, Y)
    hit = _PROD_CACHE.get(key)
    if hit is None:
        _load_disk(q)
        hit = _PROD_CACHE.get(key)
    if hit is None:
        counts = _ext_class_counts(X, Y, q)
        hit = {E: _unrescale(n, E, X, Y, q) for E, n in counts.items()}
        _PROD_CACHE[key] = hit
        _DISK["dirty"] = True
    return hit


def product_classes_subspace(X: IsoClass, Y: IsoClass, q: int) -> dict[IsoClass, int]:
    """``[X][Y]`` from the subspace oracle over all classes of the summed dimension."""
    d = (X.dim[0] + Y.dim[0], X.dim[1] + Y.dim[1])
    out = {}
    for E in enumerate_isoclasses(d, q):
        c = hall_number_subspace(E, X, Y, q)
        if c:
            out[E] = c
    return out


# ---------------------------------------------------------------------------
# elements


def _det(x, y) -> Fraction:
    return Fraction(x[0]) * y[1] - Fraction(x[1]) * y[0]


class _Elem:
    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: PrimePower | int, terms: Mapping | None = None):
        self.ctx = ctx_of(ctx)
        t = {}
        for k, v in (terms or {}).items():
            if not isinstance(v, QScalar):
                v = QScalar.const(self.ctx, v)
            if v:
                t[k] = v
        self.terms = t

    @property
    def q(self) -> int:
        return self.ctx.q

    def _new(self, terms):
        out = self.__class__.__new__(self.__class__)
        out.ctx = self.ctx
        out.terms = {k: v for k, v in terms.items() if v}
        return out

    def _same(self, other):
        if not isinstance(other, _Elem) or other.__class__ is not self.__class__:
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.ctx != self.ctx:
            raise FieldMismatch(f"q={self.q} vs q={other.q}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, QScalar)):
            other = self.scalar(other)
        self._same(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t[k] + v if k in t else v
        return self._new(t)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "_Elem":
        if not isinstance(c, QScalar):
            c = QScalar.const(self.ctx, c)
        if not c:
            return self._new({})
        return self._new({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QScalar)):
            return self.scale(other)
        return self.product(other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, QScalar)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, c):
        if not isinstance(c, QScalar):
            c = QScalar.const(self.ctx, c)
        return self.scale(c.inverse())

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined for general elements")
        out = self.one()
        for _ in range(n):
            out = out.product(self)
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.scalar(other)
        if not isinstance(other, _Elem):
            return NotImplemented
        return other.__class__ is self.__class__ and self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, key) -> QScalar:
        return self.terms.get(key, QScalar.const(self.ctx, 0))

    def commutator(self, other, t=1):
        """``[x, y]_t = x y - t y x``."""
        return self.product(other) - other.product(self).scale(t)

    def twisted_commutator(self, other, t=1):
        return self.twisted_product(other) - other.twisted_product(self).scale(t)

    def v(self, k) -> QScalar:
        return QScalar.v_pow(self.ctx, k)


class HallElem(_Elem):
    """Finite combination of iso classes with quarter-power coefficients."""

    @classmethod
    def basis(cls, q, X: IsoClass | str) -> "HallElem":
        X = parse_isoclass(X) if isinstance(X, str) else X
        return cls(q, {X: 1})

    def scalar(self, c) -> "HallElem":
        return HallElem(self.ctx, {ZERO_CLASS: c})

    def one(self) -> "HallElem":
        return self.scalar(1)

    def degree_parts(self) -> dict[tuple[int, int], "HallElem"]:
        out: dict = {}
        for k, v in self.terms.items():
            out.setdefault(k.dim, {})[k] = v
        return {d: HallElem(self.ctx, t) for d, t in out.items()}

    def is_homogeneous(self) -> bool:
        return len({k.dim for k in self.terms}) <= 1

    def product(self, other: "HallElem") -> "HallElem":
        self._same(other)
        t: dict = {}
        for X, cx in self.terms.items():
            for Y, cy in other.terms.items():
                c = cx * cy
                for E, n in product_classes(X, Y, self.q).items():
                    t[E] = t[E] + c * n if E in t else c * n
        return self._new(t)

    def twisted_product(self, other: "HallElem") -> "HallElem":
        self._same(other)
        t: dict = {}
        for X, cx in self.terms.items():
            for Y, cy in other.terms.items():
                c = cx * cy * self.v(-_det(X.dim, Y.dim))
                for E, n in product_classes(X, Y, self.q).items():
                    t[E] = t[E] + c * n if E in t else c * n
        return self._new(t)

    def localize(self) -> "LocHallElem":
        return localize_normal_form(self)

    def sigma(self) -> "HallElem":
        return self._new({k.sigma(): v for k, v in self.terms.items()})

    def tau(self) -> "HallElem":
        return self._new({k.tau(): v for k, v in self.terms.items()})

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def to_json(self) -> list:
        return [{"class": str(k), "a": 0, "ap": 0, "coeff": qscalar_text(v)} for k, v in self.items()]

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({v})[{k}]" for k, v in self.items())


def _loc_key_sort(k):
    Z, i, j = k
    return (Z.sort_key(), i, j)


def fold(E: IsoClass, ctx: PrimePower) -> tuple[IsoClass, int, int, QScalar]:
    """``[M^a + M'^b + Z] = q^{-a(2b+z1)-b z2} / (|GL_a||GL_b|) a^{4a} a'^{4b} [Z]``."""
    a = E.count(LABEL_M)
    b = E.count(LABEL_MP)
    if a == 0 and b == 0:
        return E, 0, 0, QScalar.const(ctx, 1)
    Z = IsoClass(L for L in E.labels if L.base != "M")
    z1, z2 = Z.dim
    q = ctx.q
    c = Fraction(1, gl_order(a, q) * gl_order(b, q)) * Fraction(q) ** (-(a * (2 * b + z1) + b * z2))
    return Z, 4 * a, 4 * b, QScalar.const(ctx, c)


class LocHallElem(_Elem):
    """Element of the localized algebra, keyed by ``(Z, i, j)`` for ``a^i a'^j [Z]``."""

    def __init__(self, ctx, terms: Mapping | None = None):
        ctx = ctx_of(ctx)
        t: dict = {}
        for (E, i, j), c in (terms or {}).items():
            if not isinstance(c, QScalar):
                c = QScalar.const(ctx, c)
            Z, di, dj, s = fold(E, ctx)
            k = (Z, i + di, j + dj)
            t[k] = t[k] + c * s if k in t else c * s
        super().__init__(ctx, t)

    @classmethod
    def basis(cls, q, X: IsoClass | str, i: int = 0, j: int = 0) -> "LocHallElem":
        X = parse_isoclass(X) if isinstance(X, str) else X
        return cls(q, {(X, i, j): 1})

    @classmethod
    def a_pow(cls, q, i: int, j: int = 0) -> "LocHallElem":
        return cls(q, {(ZERO_CLASS, i, j): 1})

    def scalar(self, c) -> "LocHallElem":
        return LocHallElem(self.ctx, {(ZERO_CLASS, 0, 0): c})

    def one(self) -> "LocHallElem":
        return self.scalar(1)

    @staticmethod
    def key_degree(k) -> tuple[Fraction, Fraction]:
        Z, i, j = k
        s = Fraction(i + j, 2)
        return (Z.dim[0] + s, Z.dim[1] + s)

    def degree_parts(self) -> dict:
        out: dict = {}
        for k, v in self.terms.items():
            out.setdefault(self.key_degree(k), {})[k] = v
        return {d: self._new(t) for d, t in out.items()}

    def is_homogeneous(self) -> bool:
        return len({self.key_degree(k) for k in self.terms}) <= 1

    def _mul(self, other: "LocHallElem", twisted: bool) -> "LocHallElem":
        self._same(other)
        t: dict = {}
        ctx = self.ctx
        for kx, cx in self.terms.items():
            Z1, i1, j1 = kx
            for ky, cy in other.terms.items():
                Z2, i2, j2 = ky
                c = cx * cy
                if twisted:
                    c = c * self.v(-_det(self.key_degree(kx), self.key_degree(ky)))
                for E, n in product_classes(Z1, Z2, self.q).items():
                    Z, di, dj, s = fold(E, ctx)
                    k = (Z, i1 + i2 + di, j1 + j2 + dj)
                    add = c * s * n
                    t[k] = t[k] + add if k in t else add
        return self._new(t)

    def product(self, other: "LocHallElem") -> "LocHallElem":
        return self._mul(other, False)

    def twisted_product(self, other: "LocHallElem") -> "LocHallElem":
        return self._mul(other, True)

    def sigma(self) -> "LocHallElem":
        return LocHallElem(self.ctx, {(Z.sigma(), j, i): v for (Z, i, j), v in self.terms.items()})

    def tau(self) -> "LocHallElem":
        return LocHallElem(self.ctx, {(Z.tau(), i, j): v for (Z, i, j), v in self.terms.items()})

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: _loc_key_sort(kv[0]))

    def to_json(self) -> list:
        return [{"class": str(Z), "a": i, "ap": j, "coeff": qscalar_text(v)} for (Z, i, j), v in self.items()]

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (Z, i, j), v in self.items():
            mono = "".join(s for s in (f"a^{i}" if i else "", f"a'^{j}" if j else "") if s)
            parts.append(f"({v}){mono}[{Z}]")
        return " + ".join(parts)


def localize_normal_form(x: HallElem | LocHallElem) -> LocHallElem:
    if isinstance(x, LocHallElem):
        return LocHallElem(x.ctx, dict(x.terms))
    return LocHallElem(x.ctx, {(k, 0, 0): v for k, v in x.terms.items()})


def elem_from_json(data: list, q: int) -> LocHallElem:
    ctx = ctx_of(q)
    return LocHallElem(ctx, {(parse_isoclass(d["class"]), int(d.get("a", 0)), int(d.get("ap", 0))):
                             parse_qscalar(d["coeff"], ctx) for d in data})


def apply_sigma(x):
    return x.sigma()


def apply_tau(x):
    return x.tau()


def twisted_product(x, y):
    return x.twisted_product(y)


def product(x, y):
    return x.product(y)


# ---------------------------------------------------------------------------
# named elements


def cls(*labels) -> IsoClass:
    from .catalog import iso

    return iso(*labels)


def _minimal_tuples(n: int, q: int) -> Iterator[list[tuple]]:
    """Lists of ``(phi, k)`` with distinct ``phi`` and ``sum deg(phi) k = n``."""
    F = gf.field(q)
    polys = []
    for d in range(1, n + 1):
        polys += list(gf.irreducible_polys(d, F))

    def rec(i: int, rem: int, acc: list):
        if rem == 0:
            yield list(acc)
            return
        if i == len(polys):
            return
        yield from rec(i + 1, rem, acc)
        phi = polys[i]
        d = phi.degree
        k = 1
        while d * k <= rem:
            acc.append((phi, k))
            yield from rec(i + 1, rem - d * k, acc)
            acc.pop()
            k += 1

    yield from rec(0, n, [])


def build_R(n: int, q: int, primed: bool = False) -> HallElem:
    """``R_n = (q-1)^{-1} sum alpha(R) [R]`` over minimal regular tuples of total degree ``n``."""
    ctx = ctx_of(q)
    if n < 0:
        return HallElem(ctx)
    if n == 0:
        return HallElem(ctx, {ZERO_CLASS: Fraction(1, q - 1)})
    kind = "R'" if primed else "R"
    t: dict = {}
    for tup in _minimal_tuples(n, q):
        X = IsoClass(Label(kind, k, phi) for phi, k in tup)
        t[X] = Fraction(aut_count_class(X, q), q - 1)
    return HallElem(ctx, t)


def build_Rn(n: int, q: int) -> HallElem:
    return build_R(n, q, False)


def build_Rn_prime(n: int, q: int) -> HallElem:
    return build_R(n, q, True)


def build_R_projective(n: int, q: int) -> HallElem:
    """``R_n`` as ``(q-1)^{-1} sum_{phi in P^n} alpha(R_phi) [R_phi]`` (independent oracle)."""
    ctx = ctx_of(q)
    if n == 0:
        return HallElem(ctx, {ZERO_CLASS: Fraction(1, q - 1)})
    F = gf.field(q)
    t: dict = {}
    for pt in itertools.product(range(q), repeat=n + 1):
        nz = [i for i, c in enumerate(pt) if c]
        if not nz or pt[nz[0]] != 1:
            continue  # one representative per point: leading nonzero entry is 1
        k = nz[0]
        labels = [Label("R", k, gf.ZERO_POLY)] if k else []
        deg = n - k
        if deg:
            # monic polynomial x^deg + (phi_{k+1}/phi_k) x^{deg-1} + ...
            coeffs = [pt[k + 1 + j] for j in range(deg)]  # coefficient of x^{deg-1-j}
            poly = list(reversed(coeffs)) + [1]
            for phi, m in gf.factor(poly, F):
                labels.append(Label("R", m, phi))
        X = IsoClass(labels)
        t[X] = t.get(X, 0) + Fraction(aut_count_class(X, q), q - 1)
    return HallElem(ctx, t)


def build_A(n: int, q: int) -> LocHallElem:
    """``A_n = [P_n]`` for ``n >= 0`` and ``(q-1)^n [M]^n [I'_{-n}] = a^{4n} [I'_{-n}]`` otherwise."""
    from .catalog import Ip, P

    if n >= 0:
        return LocHallElem.basis(q, IsoClass([P(n)]))
    return LocHallElem.basis(q, IsoClass([Ip(-n)]), 4 * n, 0)


def build_B(n: int, q: int) -> LocHallElem:
    """``B_n = [I_n]`` for ``n >= 0`` and ``a'^{4n} [P'_{-n}]`` otherwise."""
    from .catalog import I, Pp

    if n >= 0:
        return LocHallElem.basis(q, IsoClass([I(n)]))
    return LocHallElem.basis(q, IsoClass([Pp(-n)]), 0, 4 * n)


def M_elem(q: int, power: int = 1) -> LocHallElem:
    """``[M]^k = (a^4/(q-1))^k`` for any integer ``k``."""
    return LocHallElem(q, {(ZERO_CLASS, 4 * power, 0): Fraction(q - 1) ** (-power)})


def Mp_elem(q: int, power: int = 1) -> LocHallElem:
    return LocHallElem(q, {(ZERO_CLASS, 0, 4 * power): Fraction(q - 1) ** (-power)})


def loc(x: HallElem) -> LocHallElem:
    return localize_normal_form(x)


def twist_orientation_selftest(q: int = 2) -> bool:
    """The twist orientation makes ``A_1 * A_0 = v^2 A_0 * A_1``.

    Untwisted, ``A_1 A_0 = q^2 A_0 A_1``; with ``det(x, y)`` taken with the
    left factor first this becomes ``v^2`` after twisting, matching the
    E-E relation of the quantum side.
    """
    A0, A1 = build_A(0, q), build_A(1, q)
    lhs = A1.twisted_product(A0)
    rhs = A0.twisted_product(A1).scale(QScalar.v_pow(A0.ctx, 2))
    return lhs == rhs


def sum_elems(xs: Iterable, zero) -> object:
    out = zero
    for x in xs:
        out = out + x
    return out


__all__ = [
    "ResourceBoundError", "DEFAULT_BOUND", "dimension_bound", "current_bound",
    "hall_number_subspace", "hall_number_extension", "hall_number_extension_bruteforce",
    "product_classes", "product_classes_subspace", "HallElem", "LocHallElem", "fold",
    "localize_normal_form", "apply_sigma", "apply_tau", "product", "twisted_product",
    "build_R", "build_Rn", "build_Rn_prime", "build_R_projective", "build_A", "build_B",
    "M_elem", "Mp_elem", "twist_orientation_selftest", "elem_from_json", "flush_disk_cache",
]


def subspace_census(E: IsoClass, q: int) -> dict[tuple[IsoClass, IsoClass], int]:
    """``{(E/E', E'): count}`` over every subrepresentation ``E'`` of ``E``."""
    F = gf.field(q)
    R = rep_of_class(E, F)
    out: dict = {}
    for k1 in range(E.dim[0] + 1):
        for k2 in range(E.dim[1] + 1):
            for B1, B2 in submodules(R, k1, k2):
                key = (classify(quotient(R, B1, B2)), classify(restrict(R, B1, B2)))
                out[key] = out.get(key, 0) + 1
    return out


def dual_oracle_mismatches(max_dim: tuple[int, int], q: int) -> tuple[int, list]:
    """Compare both oracles on every ``(E, X, Y)`` with ``dim E <= max_dim``.

    Returns the number of triples checked and the list of disagreements.
    """
    checked, bad = 0, []
    for d1 in range(max_dim[0] + 1):
        for d2 in range(max_dim[1] + 1):
            for E in enumerate_isoclasses((d1, d2), q):
                census = subspace_census(E, q)
                for x1 in range(d1 + 1):
                    for x2 in range(d2 + 1):
                        for X in enumerate_isoclasses((x1, x2), q):
                            for Y in enumerate_isoclasses((d1 - x1, d2 - x2), q):
                                a = census.get((X, Y), 0)
                                counts = product_classes(X, Y, q)
                                b = counts.get(E, 0)
                                checked += 1
                                if a != b:
                                    bad.append((str(E), str(X), str(Y), a, b))
    return checked, bad
