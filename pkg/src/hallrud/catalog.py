"""Symbolic labels for indecomposables, canonical representatives and iso classes.

Label grammar: ``P1``, ``I0``, ``P'2``, ``I'1``, ``M``, ``M'``, ``R(x^2+x+1;2)``,
``R'(0;1)``.  An iso class is a ``+``-joined list in canonical order, ``0`` for
the zero module.  Since ``P'0`` and ``I0`` are the same simple module (and so
are ``I'0`` and ``P0``), primed labels with ``n = 0`` are normalized away.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Iterable, Sequence

from . import gf
from .gf import FqField, Poly, ZERO_POLY, parse_poly, poly_text
from .quiver import QuiverRep, direct_sum, make_rep, sigma as sigma_rep

KINDS = ("P", "I", "P'", "I'", "R", "R'", "M", "M'")
_KIND_ORDER = {k: i for i, k in enumerate(KINDS)}
_PRIME = {"P": "P'", "I": "I'", "R": "R'", "M": "M'", "P'": "P", "I'": "I", "R'": "R", "M'": "M"}


@dataclass(frozen=True)
class Label:
    kind: str
    n: int = 0
    phi: Poly | None = None

    def __post_init__(self):
        if self.kind not in _KIND_ORDER:
            raise ValueError(f"unknown label kind {self.kind!r}")
        if self.kind in ("R", "R'"):
            if self.phi is None or self.n < 1:
                raise ValueError("regular labels need a polynomial and n >= 1")
        elif self.phi is not None:
            raise ValueError("only regular labels carry a polynomial")
        if self.kind in ("P", "I", "P'", "I'") and self.n < 0:
            raise ValueError("n must be nonnegative")

    @property
    def primed(self) -> bool:
        return self.kind.endswith("'")

    @property
    def base(self) -> str:
        return self.kind.rstrip("'")

    @property
    def deg(self) -> int:
        return 1 if self.phi is None else self.phi.degree

    @property
    def top_degree(self) -> int:
        """Degree over F_q of the residue field of ``End``."""
        return self.phi.degree if self.phi is not None else 1

    @property
    def dim(self) -> tuple[int, int]:
        b = self.base
        if b == "P":
            d = (self.n, self.n + 1)
        elif b == "I":
            d = (self.n + 1, self.n)
        elif b == "R":
            d = (self.deg * self.n, self.deg * self.n)
        else:
            d = (2, 2)
        return (d[1], d[0]) if self.primed and b != "M" else d

    def sort_key(self):
        return (_KIND_ORDER[self.kind], self.n, self.phi.sort_key() if self.phi is not None else ())

    def __lt__(self, other: "Label") -> bool:
        return self.sort_key() < other.sort_key()

    def sigma(self) -> "Label":
        return normalize(Label(_PRIME[self.kind], self.n, self.phi))

    def tau(self) -> "Label":
        b = self.base
        if b == "M":
            return self
        if b == "R":
            return Label(_PRIME[self.kind], self.n, self.phi)
        swap = {"P": "I'", "I": "P'", "P'": "I", "I'": "P"}
        return normalize(Label(swap[self.kind], self.n))

    def __str__(self) -> str:
        if self.base == "R":
            return f"{self.kind}({poly_text(self.phi)};{self.n})"
        if self.base == "M":
            return self.kind
        return f"{self.kind}{self.n}"

    def __repr__(self) -> str:
        return f"Label({self})"


def normalize(L: Label) -> Label:
    if L.kind == "P'" and L.n == 0:
        return Label("I", 0)
    if L.kind == "I'" and L.n == 0:
        return Label("P", 0)
    return L


def sigma_label(L: Label) -> Label:
    return L.sigma()


def tau_label(L: Label) -> Label:
    return L.tau()


LABEL_M = Label("M")
LABEL_MP = Label("M'")


def P(n: int) -> Label:
    return Label("P", n)


def I(n: int) -> Label:  # noqa: E743
    return Label("I", n)


def Pp(n: int) -> Label:
    return normalize(Label("P'", n))


def Ip(n: int) -> Label:
    return normalize(Label("I'", n))


def Reg(phi: Poly | str, n: int) -> Label:
    return Label("R", n, parse_poly(phi) if isinstance(phi, str) else phi)


def RegP(phi: Poly | str, n: int) -> Label:
    return Label("R'", n, parse_poly(phi) if isinstance(phi, str) else phi)


_LABEL_RE = re.compile(r"^(R'?)\(([^;]+);(\d+)\)$|^([PI]'?)(\d+)$|^(M'?)$")


def parse_label(text: str) -> Label:
    s = text.strip().replace(" ", "")
    m = _LABEL_RE.match(s)
    if not m:
        raise ValueError(f"cannot parse label {text!r}")
    if m.group(1):
        return Label(m.group(1), int(m.group(3)), parse_poly(m.group(2)))
    if m.group(4):
        return normalize(Label(m.group(4), int(m.group(5))))
    return Label(m.group(6))


def sort_labels(labels: Iterable[Label]) -> list[Label]:
    return sorted((normalize(L) for L in labels), key=Label.sort_key)


# ---------------------------------------------------------------------------
# iso classes


@dataclass(frozen=True)
class IsoClass:
    labels: tuple[Label, ...] = ()
    _dim: tuple[int, int] = dc_field(default=(0, 0), compare=False, hash=False, repr=False)

    def __init__(self, labels: Iterable[Label] = ()):
        labs = tuple(sort_labels(labels))
        object.__setattr__(self, "labels", labs)
        object.__setattr__(self, "_dim", (sum(L.dim[0] for L in labs), sum(L.dim[1] for L in labs)))

    @property
    def dim(self) -> tuple[int, int]:
        return self._dim

    @property
    def is_zero(self) -> bool:
        return not self.labels

    def __add__(self, other: "IsoClass") -> "IsoClass":
        return IsoClass(self.labels + other.labels)

    def count(self, L: Label) -> int:
        return sum(1 for x in self.labels if x == L)

    def without(self, L: Label, k: int = 1) -> "IsoClass":
        out, dropped = [], 0
        for x in self.labels:
            if x == L and dropped < k:
                dropped += 1
                continue
            out.append(x)
        if dropped < k:
            raise ValueError(f"{L} does not occur {k} times")
        return IsoClass(out)

    def multiplicities(self) -> dict[Label, int]:
        out: dict[Label, int] = {}
        for L in self.labels:
            out[L] = out.get(L, 0) + 1
        return out

    def sigma(self) -> "IsoClass":
        return IsoClass(L.sigma() for L in self.labels)

    def tau(self) -> "IsoClass":
        return IsoClass(L.tau() for L in self.labels)

    def sort_key(self):
        return (self.dim, len(self.labels), tuple(L.sort_key() for L in self.labels))

    def __lt__(self, other: "IsoClass") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return "+".join(str(L) for L in self.labels) if self.labels else "0"

    def __repr__(self) -> str:
        return f"IsoClass({self})"


ZERO_CLASS = IsoClass()


def iso(*labels: Label | str) -> IsoClass:
    return IsoClass(parse_label(L) if isinstance(L, str) else L for L in labels)


def parse_isoclass(text: str) -> IsoClass:
    s = text.strip()
    if s in ("", "0"):
        return ZERO_CLASS
    parts, depth, cur = [], 0, ""
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "+" and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return IsoClass(parse_label(p) for p in parts)


# ---------------------------------------------------------------------------
# canonical representatives


def _rep_unprimed(L: Label, F: FqField) -> QuiverRep:
    n = L.n
    if L.kind == "P":
        e = gf.zeros(n + 1, n)
        f = gf.zeros(n + 1, n)
        for i in range(n):
            e[i, i] = 1
            f[i + 1, i] = 1
        return make_rep(F, n, n + 1, e, f)
    if L.kind == "I":
        e = gf.zeros(n, n + 1)
        f = gf.zeros(n, n + 1)
        for i in range(n):
            e[i, i] = 1
            f[i, i + 1] = 1
        return make_rep(F, n + 1, n, e, f)
    if L.kind == "R":
        if L.phi.is_zero:
            return make_rep(F, n, n, gf.jordan_nilpotent(n), gf.identity(n))
        m = L.phi.degree * n
        return make_rep(F, m, m, gf.identity(m), gf.block_companion(L.phi, n, F))
    if L.kind == "M":
        # x1 -> y1 (e), x1 -> y2 (f), y2 -> x2 (ep), y1 -> -x2 (fp)
        return make_rep(F, 2, 2, [[1, 0], [0, 0]], [[0, 0], [1, 0]],
                        [[0, 0], [0, 1]], [[0, 0], [F.s_neg(1), 0]])
    if L.kind == "M'":
        # x2 -> y2 (e), x1 -> y2 (f), y1 -> x1 (ep), y1 -> -x2 (fp)
        return make_rep(F, 2, 2, [[0, 0], [0, 1]], [[0, 0], [1, 0]],
                        [[1, 0], [0, 0]], [[0, 0], [F.s_neg(1), 0]])
    raise ValueError(L)


_REP_CACHE: dict = {}


def rep_of_label(L: Label, F: FqField) -> QuiverRep:
    L = normalize(L)
    key = (F.q, L)
    hit = _REP_CACHE.get(key)
    if hit is None:
        if L.primed and L.kind != "M'":
            hit = sigma_rep(_rep_unprimed(Label(_PRIME[L.kind], L.n, L.phi), F))
        else:
            hit = _rep_unprimed(L, F)
        _REP_CACHE[key] = hit
    return hit


def rep_of_labels(labels: Sequence[Label], F: FqField) -> QuiverRep:
    return direct_sum([rep_of_label(L, F) for L in labels], F)


def rep_of_class(X: IsoClass, F: FqField) -> QuiverRep:
    return rep_of_labels(X.labels, F)


# ---------------------------------------------------------------------------
# enumeration


@lru_cache(maxsize=None)
def indecomposables_within(q: int, d1: int, d2: int) -> tuple[Label, ...]:
    """All indecomposable labels with dimension componentwise at most ``(d1, d2)``."""
    F = gf.field(q)
    out: list[Label] = []

    def fits(L: Label) -> bool:
        a, b = L.dim
        return a <= d1 and b <= d2 and a + b > 0

    for n in range(max(d1, d2) + 1):
        for K in ("P", "I", "P'", "I'"):
            L = normalize(Label(K, n))
            if fits(L) and L not in out:
                out.append(L)
    for d in range(1, min(d1, d2) + 1):
        for phi in gf.irreducible_polys(d, F):
            for n in range(1, min(d1, d2) // d + 1):
                for K in ("R", "R'"):
                    L = Label(K, n, phi)
                    if fits(L):
                        out.append(L)
    for L in (LABEL_M, LABEL_MP):
        if fits(L):
            out.append(L)
    return tuple(sorted(out, key=Label.sort_key))


@lru_cache(maxsize=None)
def _enumerate(q: int, d1: int, d2: int) -> tuple[IsoClass, ...]:
    labs = indecomposables_within(q, d1, d2)
    out: list[IsoClass] = []

    def rec(i: int, r1: int, r2: int, acc: list[Label]):
        if r1 == 0 and r2 == 0:
            out.append(IsoClass(acc))
            return
        if i == len(labs):
            return
        L = labs[i]
        a, b = L.dim
        # use L some number of times, then move on
        k = 0
        while k * a <= r1 and k * b <= r2:
            rec(i + 1, r1 - k * a, r2 - k * b, acc + [L] * k)
            k += 1
            if a == 0 and b == 0:
                break

    rec(0, d1, d2, [])
    return tuple(sorted(out, key=IsoClass.sort_key))


def enumerate_isoclasses(dim: tuple[int, int], F: FqField | int) -> list[IsoClass]:
    q = F if isinstance(F, int) else F.q
    d1, d2 = dim
    if d1 < 0 or d2 < 0:
        return []
    return list(_enumerate(q, d1, d2))


def classify(R: QuiverRep) -> IsoClass:
    from .quiver import decompose

    return IsoClass(decompose(R))


# ---------------------------------------------------------------------------
# closed-form Hom dimensions


def _hom_kronecker(X: Label, Y: Label) -> int:
    """``dim Hom(X, Y)`` for two unprimed Kronecker indecomposables."""
    a, b = X.base, Y.base
    if a == "P" and b == "P":
        return max(0, Y.n - X.n + 1)
    if a == "I" and b == "I":
        return max(0, X.n - Y.n + 1)
    if a == "P" and b == "I":
        return X.n + Y.n
    if a == "P" and b == "R":
        return Y.deg * Y.n
    if a == "R" and b == "I":
        return X.deg * X.n
    if a == "R" and b == "R":
        return X.deg * min(X.n, Y.n) if X.phi == Y.phi else 0
    return 0  # Hom(I,P) = Hom(R,P) = Hom(I,R) = 0


def _unprime(L: Label) -> Label:
    return Label(_PRIME[L.kind], L.n, L.phi) if L.primed else L


def hom_dim_formula(X: Label, Y: Label, q: int | None = None) -> int:
    """Closed-form ``dim Hom(X, Y)`` between indecomposables."""
    X, Y = normalize(X), normalize(Y)
    if X.base == "M":
        return Y.dim[0] if X.kind == "M" else Y.dim[1]
    if Y.base == "M":
        return X.dim[0] if Y.kind == "M" else X.dim[1]
    # the simples I0 and P0 count as unprimed; everything is primed or not
    if X.primed == Y.primed:
        return _hom_kronecker(_unprime(X), _unprime(Y))
    if not X.primed:
        # (e,f)-part into (e',f')-part: only V1 components survive
        return X.dim[0] * Y.dim[0]
    return X.dim[1] * Y.dim[1]


def hom_dim_classes(X: IsoClass, Y: IsoClass) -> int:
    return sum(hom_dim_formula(a, b) for a in X.labels for b in Y.labels)


def end_dim_class(X: IsoClass) -> int:
    return hom_dim_classes(X, X)


def aut_count_class(X: IsoClass, q: int) -> int:
    from .quiver import aut_count_formula

    return aut_count_formula(X.labels, q, end_dim_class(X))


def sigma1_point(phi: Poly, F: FqField) -> tuple[int, int]:
    """The bijection of Sigma_1 with P^1(F_q): ``x - c <-> [1:c]``, ``0 <-> [0:1]``."""
    if phi.is_zero:
        return (0, 1)
    if phi.degree != 1:
        raise ValueError("only degree-one polynomials correspond to points")
    return (1, F.s_neg(phi.coeffs[0]))


def poly_of_point(pt: tuple[int, int], F: FqField) -> Poly:
    a, b = pt
    if a == 0:
        return ZERO_POLY
    c = F.s_mul(b, F.s_inv(a))
    return Poly((F.s_neg(c), 1))


__all__ = [
    "Label", "IsoClass", "ZERO_CLASS", "LABEL_M", "LABEL_MP", "P", "I", "Pp", "Ip", "Reg", "RegP",
    "parse_label", "parse_isoclass", "iso", "normalize", "sort_labels", "sigma_label", "tau_label",
    "rep_of_label", "rep_of_labels", "rep_of_class", "enumerate_isoclasses", "indecomposables_within",
    "classify", "hom_dim_formula", "hom_dim_classes", "end_dim_class", "aut_count_class",
    "sigma1_point", "poly_of_point",
]
