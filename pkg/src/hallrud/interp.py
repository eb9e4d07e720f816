"""Interpolating spherical structure constants as Laurent polynomials in ``v``.

For ordered monomials ``X, Y, Z`` of the spherical basis the coefficient of
``Z`` in ``XY`` is computed exactly at several prime powers ``q``, and an
integer Laurent polynomial in ``v = q^{1/2}`` is fitted and then checked at a
held-out ``q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .catalog import IsoClass
from .scalars import PrimePower, QScalar
from .spherical import SphericalMonomial, express_in_spherical_basis, monomials_of_degree, parse_monomial

DEFAULT_QS = (2, 3, 5)
DEFAULT_HOLDOUT = 7
ENLARGE_STEPS = 2


class InsufficientSamples(ValueError):
    """Too few distinct sample points for the requested fit."""


class NonIntegralFit(ValueError):
    """No integer Laurent polynomial in the searched windows fits the samples."""

    def __init__(self, message: str, samples=()):
        super().__init__(message)
        self.samples = list(samples)


def as_monomial(key) -> SphericalMonomial:
    """Accept a monomial or its text form; raw iso classes are rejected."""
    if isinstance(key, SphericalMonomial):
        return key
    if isinstance(key, IsoClass):
        raise TypeError("iso classes are not field-independent; use spherical monomial keys")
    if isinstance(key, str):
        return parse_monomial(key)
    raise TypeError(f"not a spherical monomial key: {key!r}")


@lru_cache(maxsize=None)
def _expansion(X: SphericalMonomial, Y: SphericalMonomial, q: int, twisted: bool) -> tuple:
    x = X.element(q, twisted)
    y = Y.element(q, twisted)
    xy = x.twisted_product(y) if twisted else x.product(y)
    coords = express_in_spherical_basis(xy, twisted=twisted)
    return tuple(sorted(coords.items(), key=lambda kv: str(kv[0])))


def structure_constant(X, Y, Z, q: int, twisted: bool = False) -> QScalar:
    """The coefficient of ``Z`` in the product ``XY`` over ``F_q``."""
    X, Y, Z = as_monomial(X), as_monomial(Y), as_monomial(Z)
    for m, c in _expansion(X, Y, q, twisted):
        if m == Z:
            return c
    return QScalar.const(PrimePower.from_q(q), 0)


def product_expansion(X, Y, q: int, twisted: bool = False) -> dict[SphericalMonomial, QScalar]:
    return dict(_expansion(as_monomial(X), as_monomial(Y), q, twisted))


# ---------------------------------------------------------------------------
# Laurent polynomials in v


def laurent_text(coeffs: dict[int, int]) -> str:
    """``{2: 1, 0: -3}`` becomes ``"v^2 - 3"``; the zero polynomial is ``"0"``."""
    terms = [(k, c) for k, c in sorted(coeffs.items(), reverse=True) if c]
    if not terms:
        return "0"
    out = []
    for n, (k, c) in enumerate(terms):
        mag = abs(c)
        mono = "" if k == 0 else ("v" if k == 1 else f"v^{k}")
        body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
        if n == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


def laurent_eval(coeffs: dict[int, int], q: int) -> QScalar:
    ctx = PrimePower.from_q(q)
    out = QScalar.const(ctx, 0)
    for k, c in coeffs.items():
        out = out + QScalar.v_pow(ctx, k) * c
    return out


def _equations(samples: Sequence[tuple[int, QScalar]], lo: int, hi: int):
    """Rational rows ``sum_k c_k [v^k]_comp = [value]_comp`` for each sample and component."""
    rows = []
    for q, val in samples:
        ctx = PrimePower.from_q(q)
        cols = [QScalar.v_pow(ctx, k).c for k in range(lo, hi + 1)]
        for comp in range(4):
            row = [Fraction(c[comp]) for c in cols]
            rhs = Fraction(val.c[comp])
            if any(row) or rhs:
                rows.append((row, rhs))
    return rows


def _solve_unique(rows, n: int) -> list[Fraction] | None:
    """Unique solution of a consistent full-column-rank rational system, else ``None``."""
    A = [list(r) + [b] for r, b in rows]
    piv, r = [], 0
    for c in range(n):
        p = next((i for i in range(r, len(A)) if A[i][c]), None)
        if p is None:
            return None
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        piv.append(c)
        r += 1
    if any(A[i][n] for i in range(r, len(A))):
        return None
    return [A[i][n] for i in range(n)]


def fit_laurent(samples: Sequence[tuple[int, QScalar]], radius: int) -> tuple[dict[int, int], tuple[int, int]] | None:
    """Simplest integer Laurent polynomial in ``v`` with exponents in ``[-radius, radius]``.

    Every window of consecutive exponents on which the samples determine the
    coefficients uniquely is solved; among the integral solutions the one with
    the fewest terms, then the smallest sum of absolute coefficients, wins.
    Few samples admit several exact integral fits on different windows, so
    this choice is only a proposal that the held-out point must confirm.
    """
    if all(not val for _, val in samples):
        return {}, (0, -1)
    best = None
    for width in range(1, 2 * radius + 2):
        for lo in range(-radius, radius - width + 2):
            hi = lo + width - 1
            rows = _equations(samples, lo, hi)
            if len(rows) < width:
                continue
            sol = _solve_unique(rows, width)
            if sol is None or any(x.denominator != 1 for x in sol):
                continue
            coeffs = {lo + k: int(x) for k, x in enumerate(sol) if x}
            rank = (len(coeffs), sum(abs(c) for c in coeffs.values()), width,
                    max(abs(k) for k in coeffs), lo)
            if best is None or rank < best[0]:
                best = (rank, coeffs, (lo, hi))
    return None if best is None else (best[1], best[2])


# ---------------------------------------------------------------------------
# fits


@dataclass
class LaurentFit:
    X: SphericalMonomial
    Y: SphericalMonomial
    Z: SphericalMonomial
    samples: list[tuple[int, QScalar]]
    coeffs: dict[int, int]
    window: tuple[int, int]
    holdout: int
    holdout_value: QScalar
    predicted: QScalar
    twisted: bool = False

    @property
    def residual(self) -> QScalar:
        return self.holdout_value - self.predicted

    @property
    def validated(self) -> bool:
        return not self.residual

    @property
    def integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs.values())

    @property
    def polynomial(self) -> str:
        return laurent_text(self.coeffs)

    def to_json(self) -> dict:
        return {
            "X": str(self.X), "Y": str(self.Y), "Z": str(self.Z), "twisted": self.twisted,
            "polynomial": self.polynomial,
            "coefficients": {str(k): c for k, c in sorted(self.coeffs.items())},
            "window": list(self.window),
            "samples": [{"q": q, "value": str(v)} for q, v in self.samples],
            "holdout": {"q": self.holdout, "value": str(self.holdout_value),
                        "predicted": str(self.predicted), "ok": self.validated},
        }


def _total_dim(X: SphericalMonomial, Y: SphericalMonomial) -> int:
    d = [a + b for a, b in zip(X.degree, Y.degree)]
    return max(1, math.ceil(d[0] + d[1]))


def structure_constant_poly(X, Y, Z, q_list: Iterable[int] = DEFAULT_QS, q_holdout: int = DEFAULT_HOLDOUT,
                            twisted: bool = False) -> LaurentFit:
    """Fit ``P^Z_{X,Y}`` as an integer Laurent polynomial in ``v`` and check it at ``q_holdout``.

    The default window is ``[-2D, 2D]`` with ``D`` the total dimension of
    ``XY``; on failure it is doubled up to ``ENLARGE_STEPS`` times before
    ``NonIntegralFit`` is raised.
    """
    X, Y, Z = as_monomial(X), as_monomial(Y), as_monomial(Z)
    qs = sorted(set(int(q) for q in q_list))
    if not qs or len(qs) != len(list(q_list)):
        raise InsufficientSamples("q_list must be nonempty and pairwise distinct")
    if q_holdout in qs:
        raise InsufficientSamples("holdout q must differ from the sample points")
    for q in qs + [q_holdout]:
        PrimePower.from_q(q)
    samples = [(q, structure_constant(X, Y, Z, q, twisted)) for q in qs]
    radius = 2 * _total_dim(X, Y)
    found = None
    for step in range(ENLARGE_STEPS + 1):
        if step:
            radius *= 2
        found = fit_laurent(samples, radius)
        if found is not None:
            break
    if found is None:
        raise NonIntegralFit(f"no integer Laurent polynomial fits P^{Z}_{{{X},{Y}}} within |k| <= {radius}",
                             samples)
    coeffs, window = found
    actual = structure_constant(X, Y, Z, q_holdout, twisted)
    return LaurentFit(X, Y, Z, samples, coeffs, window, q_holdout, actual, laurent_eval(coeffs, q_holdout), twisted)


# ---------------------------------------------------------------------------
# survey over all small pairs


@dataclass
class SurveyRow:
    X: SphericalMonomial
    Y: SphericalMonomial
    Z: SphericalMonomial
    ok: bool
    polynomial: str | None
    reason: str = ""
    samples: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"X": str(self.X), "Y": str(self.Y), "Z": str(self.Z), "ok": self.ok,
                "polynomial": self.polynomial, "reason": self.reason,
                "samples": [{"q": q, "value": str(v)} for q, v in self.samples]}


def survey_pairs(max_dim: tuple[int, int] = (2, 2)) -> list[tuple[SphericalMonomial, SphericalMonomial]]:
    """All pairs of non-unit monomials without ``a``-prefix whose degrees add up to at most ``max_dim``."""
    monos = []
    for d1 in range(max_dim[0] + 1):
        for d2 in range(max_dim[1] + 1):
            if (d1, d2) != (0, 0):
                monos.extend(monomials_of_degree((d1, d2)))
    out = []
    for X in monos:
        for Y in monos:
            d = X.hall_degree[0] + Y.hall_degree[0], X.hall_degree[1] + Y.hall_degree[1]
            if d[0] <= max_dim[0] and d[1] <= max_dim[1]:
                out.append((X, Y))
    return out


def interpolation_survey(max_dim: tuple[int, int] = (2, 2), q_list: Sequence[int] = DEFAULT_QS,
                         q_holdout: int = DEFAULT_HOLDOUT, twisted: bool = False) -> list[SurveyRow]:
    """Fit every nonzero structure constant ``P^Z_{X,Y}`` over :func:`survey_pairs`."""
    rows = []
    for X, Y in survey_pairs(max_dim):
        Zs: set = set()
        for q in list(q_list) + [q_holdout]:
            Zs.update(m for m, _ in _expansion(X, Y, q, twisted))
        for Z in sorted(Zs, key=str):
            try:
                fit = structure_constant_poly(X, Y, Z, q_list, q_holdout, twisted)
            except NonIntegralFit as exc:
                rows.append(SurveyRow(X, Y, Z, False, None, "non-integral", exc.samples))
                continue
            if fit.validated:
                rows.append(SurveyRow(X, Y, Z, True, fit.polynomial, "", fit.samples))
            else:
                rows.append(SurveyRow(X, Y, Z, False, fit.polynomial, "holdout mismatch", fit.samples))
    return rows


__all__ = [
    "LaurentFit", "SurveyRow", "InsufficientSamples", "NonIntegralFit", "structure_constant",
    "structure_constant_poly", "product_expansion", "fit_laurent", "laurent_text", "laurent_eval",
    "interpolation_survey", "survey_pairs", "as_monomial", "DEFAULT_QS", "DEFAULT_HOLDOUT",
]
