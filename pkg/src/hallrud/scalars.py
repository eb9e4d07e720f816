"""Exact scalars.

Two coefficient rings are used throughout the package:

* :class:`QScalar`, elements of ``Q[u]/(u^4 - p)`` where ``u = p^{1/4}``.  For
  ``q = p^e`` this field contains ``v = q^{1/2} = u^{2e}`` and ``q^{1/4} = u^e``,
  which is everything the Hall side needs.
* :class:`RatFun`, rational functions in ``v`` with integer coefficients, used
  on the quantum side.  :func:`specialize_v` maps one to the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class PrimePower:
    p: int
    e: int = 1

    def __post_init__(self) -> None:
        if not is_prime(self.p) or self.e < 1:
            raise ValueError(f"not a prime power: p={self.p}, e={self.e}")

    @property
    def q(self) -> int:
        return self.p**self.e

    @staticmethod
    def from_q(q: int) -> "PrimePower":
        for p in range(2, q + 1):
            if q % p == 0:
                e, r = 0, q
                while r % p == 0:
                    r //= p
                    e += 1
                if r != 1:
                    break
                return PrimePower(p, e)
        raise ValueError(f"{q} is not a prime power")


class ContextMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# QScalar


class QScalar:
    """``a0 + a1 u + a2 u^2 + a3 u^3`` with ``u^4 = p``."""

    __slots__ = ("c", "ctx", "_h")

    def __init__(self, ctx: PrimePower, coeffs: Sequence[Number] = (0, 0, 0, 0)):
        c = tuple(Fraction(x) for x in coeffs)
        if len(c) != 4:
            raise ValueError("QScalar needs four coefficients")
        self.c = c
        self.ctx = ctx
        self._h = None

    # constructors
    @classmethod
    def const(cls, ctx: PrimePower, x: Number) -> "QScalar":
        return cls(ctx, (x, 0, 0, 0))

    @classmethod
    def u_pow(cls, ctx: PrimePower, n: int) -> "QScalar":
        k, r = divmod(n, 4)
        c = [0, 0, 0, 0]
        c[r] = Fraction(ctx.p) ** k
        return cls(ctx, c)

    @classmethod
    def v_pow(cls, ctx: PrimePower, k: Number) -> "QScalar":
        """``v^k`` for ``k`` an integer or half-integer."""
        k = Fraction(k)
        n = k * 2 * ctx.e
        if n.denominator != 1:
            raise ValueError(f"v^{k} is not in the quarter-power field")
        return cls.u_pow(ctx, int(n))

    @classmethod
    def q_pow(cls, ctx: PrimePower, k: Number) -> "QScalar":
        return cls.v_pow(ctx, Fraction(k) * 2)

    # helpers
    def _coerce(self, other) -> "QScalar":
        if isinstance(other, QScalar):
            if other.ctx != self.ctx:
                raise ContextMismatch(f"{self.ctx} vs {other.ctx}")
            return other
        if isinstance(other, (int, Fraction)):
            return QScalar(self.ctx, (other, 0, 0, 0))
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.c)

    def __bool__(self) -> bool:
        return any(self.c)

    def is_rational(self) -> bool:
        return not (self.c[1] or self.c[2] or self.c[3])

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.c[0] == other
        if isinstance(other, QScalar):
            return self.ctx == other.ctx and self.c == other.c
        return NotImplemented

    def __hash__(self) -> int:
        if self._h is None:
            self._h = hash((self.ctx, self.c))
        return self._h

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QScalar(self.ctx, [a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __neg__(self):
        return QScalar(self.ctx, [-a for a in self.c])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QScalar(self.ctx, [a - b for a, b in zip(self.c, o.c)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QScalar(self.ctx, [a * other for a in self.c])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.c, o.c
        p = self.ctx.p
        r = [Fraction(0)] * 7
        for i in range(4):
            if a[i]:
                for j in range(4):
                    if b[j]:
                        r[i + j] += a[i] * b[j]
        return QScalar(self.ctx, [r[0] + p * r[4], r[1] + p * r[5], r[2] + p * r[6], r[3]])

    __rmul__ = __mul__

    def inverse(self) -> "QScalar":
        if self.is_zero():
            raise ZeroDivisionError("QScalar division by zero")
        a0, a1, a2, a3 = self.c
        p = self.ctx.p
        # x = A + B u with A = a0 + a2 u^2, B = a1 + a3 u^2; conj = A - B u
        conj1 = QScalar(self.ctx, (a0, -a1, a2, -a3))
        n1 = self * conj1  # lies in Q(u^2)
        al, be = n1.c[0], n1.c[2]
        conj2 = QScalar(self.ctx, (al, 0, -be, 0))
        norm = al * al - p * be * be
        return conj1 * conj2 * (1 / norm)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("QScalar division by zero")
            return self * (1 / Fraction(other))
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = QScalar.const(self.ctx, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __repr__(self) -> str:
        return f"QScalar({self})"

    def __str__(self) -> str:
        return qscalar_text(self)


def qscalar_text(x: QScalar) -> str:
    parts = [str(x.c[0])]
    for i, name in ((1, "u"), (2, "u^2"), (3, "u^3")):
        parts.append(f"{x.c[i]}*{name}")
    return " + ".join(parts)


def parse_qscalar(text: str, ctx: PrimePower) -> QScalar:
    c = [Fraction(0)] * 4
    for term in text.split(" + "):
        term = term.strip()
        if "*u" in term:
            coeff, power = term.split("*")
            i = 1 if power == "u" else int(power.split("^")[1])
            c[i] += Fraction(coeff)
        else:
            c[0] += Fraction(term)
    return QScalar(ctx, c)


# ---------------------------------------------------------------------------
# Polynomials over Q (coefficient lists, low degree first)


def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def padd(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def pneg(a: Sequence) -> list:
    return [-x for x in a]


def pmul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    r = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                r[i + j] += x * y
    return _trim(r)


def pdivmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    a = [Fraction(x) for x in a]
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lead = Fraction(b[-1])
    qt = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        c = a[-1] / lead
        qt[k] = c
        for i, y in enumerate(b):
            a[i + k] -= c * y
        _trim(a)
    return _trim(qt), a


def pgcd(a: Sequence, b: Sequence) -> list:
    a, b = [Fraction(x) for x in a], [Fraction(x) for x in b]
    _trim(a)
    _trim(b)
    while b:
        a, b = b, pdivmod(a, b)[1]
    if not a:
        return []
    lead = a[-1]
    return [x / lead for x in a]


def _content(a: Sequence[int]) -> int:
    g = 0
    for x in a:
        g = gcd(g, int(x))
    return g


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


# ---------------------------------------------------------------------------
# RatFun


class RatFun:
    """Rational function ``num(v)/den(v)`` over Z, kept in canonical form."""

    __slots__ = ("num", "den", "_h")

    def __init__(self, num: Sequence[Number], den: Sequence[Number] = (1,), _canonical: bool = False):
        if _canonical:
            self.num, self.den = tuple(num), tuple(den)
        else:
            self.num, self.den = _normalize(list(num), list(den))
        self._h = None

    @classmethod
    def const(cls, x: Number) -> "RatFun":
        return _const(Fraction(x))

    @classmethod
    def v_pow(cls, k: int) -> "RatFun":
        return _vpow(k)

    @classmethod
    def laurent(cls, terms: dict) -> "RatFun":
        """Build from ``{exponent: coefficient}``."""
        if not terms:
            return ZERO
        lo = min(terms)
        shift = -lo if lo < 0 else 0
        num = [0] * (max(terms) + shift + 1)
        for k, c in terms.items():
            num[k + shift] += Fraction(c)
        den = [0] * shift + [1]
        return cls(num, den)

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RatFun.const(other)
        if not isinstance(other, RatFun):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._h is None:
            self._h = hash((self.num, self.den))
        return self._h

    @staticmethod
    def _c(x) -> "RatFun":
        if isinstance(x, RatFun):
            return x
        if isinstance(x, (int, Fraction)):
            return RatFun.const(x)
        raise TypeError(f"cannot coerce {type(x)} to RatFun")

    def __add__(self, other):
        o = self._c(other)
        if not o.num:
            return self
        if not self.num:
            return o
        if self.den == o.den:
            return RatFun(padd(self.num, o.num), self.den)
        return RatFun(padd(pmul(self.num, o.den), pmul(o.num, self.den)), pmul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RatFun(pneg(self.num), self.den, _canonical=True)

    def __sub__(self, other):
        return self + (-self._c(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._c(other)
        if not o.num or not self.num:
            return ZERO
        return RatFun(pmul(self.num, o.num), pmul(self.den, o.den))

    __rmul__ = __mul__

    def inverse(self) -> "RatFun":
        if not self.num:
            raise ZeroDivisionError("RatFun division by zero")
        return RatFun(self.den, self.num)

    def __truediv__(self, other):
        return self * self._c(other).inverse()

    def __rtruediv__(self, other):
        return self._c(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        r = ONE
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def laurent_terms(self) -> dict | None:
        """``{exponent: coefficient}`` if this is a Laurent polynomial over Q."""
        if len(self.den) == 0:
            return None
        k = len(self.den) - 1
        if any(self.den[:k]):
            return None
        lead = Fraction(self.den[k])
        return {i - k: Fraction(c) / lead for i, c in enumerate(self.num) if c}

    def is_laurent(self) -> bool:
        return self.laurent_terms() is not None

    def __repr__(self) -> str:
        return f"RatFun({self})"

    def __str__(self) -> str:
        terms = self.laurent_terms()
        if terms is not None:
            return laurent_poly_text(terms, "v")
        return f"({poly_text(self.num, 'v')})/({poly_text(self.den, 'v')})"


def laurent_poly_text(terms: dict, var: str) -> str:
    """``{2: 1, -1: -3}`` becomes ``"v^2 - 3*v^-1"``; the zero polynomial is ``"0"``."""
    out = ""
    for k, c in sorted(((k, c) for k, c in terms.items() if c), reverse=True):
        mag = abs(c)
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
        sign = "-" if c < 0 else "+"
        out = (("-" if sign == "-" else "") + body) if not out else f"{out} {sign} {body}"
    return out or "0"


def poly_text(coeffs: Sequence, var: str) -> str:
    if not coeffs:
        return "0"
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _normalize(num: list, den: list) -> tuple[tuple, tuple]:
    _trim(num)
    _trim(den)
    if not den:
        raise ZeroDivisionError("RatFun with zero denominator")
    if not num:
        return (), (1,)
    # strip common powers of v cheaply before the general gcd
    k = 0
    while num[k] == 0 and den[k] == 0:
        k += 1
    if k:
        num, den = num[k:], den[k:]
    if len(den) > 1 and len(num) > 1:
        g = pgcd(num, den)
        if len(g) > 1:
            num = pdivmod(num, g)[0]
            den = pdivmod(den, g)[0]
    # clear denominators
    m = 1
    for x in list(num) + list(den):
        if isinstance(x, Fraction):
            m = _lcm(m, x.denominator)
    num = [int(Fraction(x) * m) for x in num]
    den = [int(Fraction(x) * m) for x in den]
    g = gcd(_content(num), _content(den))
    if g > 1:
        num = [x // g for x in num]
        den = [x // g for x in den]
    if den[-1] < 0:
        num = [-x for x in num]
        den = [-x for x in den]
    return tuple(num), tuple(den)


ZERO = RatFun((), (1,), _canonical=True)
ONE = RatFun((1,), (1,), _canonical=True)


@lru_cache(maxsize=None)
def _const(x: Fraction) -> RatFun:
    return RatFun([x], [1])


@lru_cache(maxsize=None)
def _vpow(k: int) -> RatFun:
    if k >= 0:
        return RatFun([0] * k + [1], [1], _canonical=True)
    return RatFun([1], [0] * (-k) + [1], _canonical=True)


V = _vpow(1)
V_MINUS_VINV = RatFun([-1, 0, 1], [0, 1])


# ---------------------------------------------------------------------------
# quantum numbers


@lru_cache(maxsize=None)
def qnum(n: int) -> RatFun:
    """``[n] = (v^n - v^{-n})/(v - v^{-1})``."""
    if n == 0:
        return ZERO
    if n < 0:
        return -qnum(-n)
    return RatFun.laurent({n - 1 - 2 * i: 1 for i in range(n)})


@lru_cache(maxsize=None)
def qfactorial(n: int) -> RatFun:
    r = ONE
    for i in range(1, n + 1):
        r = r * qnum(i)
    return r


def qbinomial(n: int, k: int) -> RatFun:
    if k < 0 or k > n:
        return ZERO
    return qfactorial(n) / (qfactorial(k) * qfactorial(n - k))


def evaluate_poly_q(coeffs: Sequence[int], x: QScalar) -> QScalar:
    acc = QScalar.const(x.ctx, 0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def specialize_v(f: RatFun, ctx: PrimePower) -> QScalar:
    """Image of ``f`` under ``v -> u^{2e}``."""
    return _specialize(f, ctx)


@lru_cache(maxsize=200000)
def _specialize(f: RatFun, ctx: PrimePower) -> QScalar:
    v = QScalar.v_pow(ctx, 1)
    num = evaluate_poly_q(f.num, v)
    den = evaluate_poly_q(f.den, v)
    if den.is_zero():
        raise ZeroDivisionError(f"denominator of {f} vanishes at v = q^(1/2), q = {ctx.q}")
    return num / den


def quantum_number(n: int, ctx: PrimePower | None = None):
    """``[n]`` as a :class:`RatFun`, or its value in the quarter-power field."""
    r = qnum(n)
    return r if ctx is None else specialize_v(r, ctx)


def gl_order(n: int, q: int) -> int:
    r = 1
    for i in range(n):
        r *= q**n - q**i
    return r


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def as_fraction_list(xs: Iterable) -> list[Fraction]:
    return [Fraction(x) for x in xs]
