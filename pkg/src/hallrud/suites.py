"""Named verification suites shared by the command line and the test-suite.

Each suite is a list of :class:`Case` objects; running a case returns whether
the identity holds together with a JSON-ready detail record.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable

from . import gf, quantum as qa, spherical as sph
from .hall import dimension_bound

SUITES = ("relsummary", "szanto", "theta", "heisenberg", "spherical", "finpres", "pbw")


class UnknownSuite(KeyError):
    pass


@dataclass
class Case:
    suite: str
    key: str
    params: dict
    q: int | None
    fn: Callable[[], bool]
    description: str = ""
    bound: tuple[int, int] | None = None

    def run(self) -> dict:
        if self.bound is not None:
            with dimension_bound(self.bound):
                holds = bool(self.fn())
        else:
            holds = bool(self.fn())
        return {"suite": self.suite, "key": self.key, "params": _jsonable(self.params), "q": self.q,
                "holds": holds, "description": self.description}

    @property
    def label(self) -> str:
        ps = ",".join(f"{k}={_jsonable(v)}" for k, v in sorted(self.params.items()))
        return f"{self.key}({ps})" + (f"@q={self.q}" if self.q else "")


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (int, float, str, bool)) or v is None:
        return v
    if hasattr(v, "coeffs"):
        return gf.poly_text(v)
    return str(v)


def _identity_case(suite: str, key: str, q: int, bound=None, **params) -> Case:
    return Case(suite, key, params, q, lambda: sph.verify_identity(key, q, **params).holds,
                sph.identity_description(key), bound)


# ---------------------------------------------------------------------------
# Hall identities


def relsummary_cases(q: int, max_index: int = 3) -> list[Case]:
    s, n_max = "relsummary", max_index
    out = [_identity_case(s, k, q) for k in ("simples-commutator", "i0-p1-qcommutator", "p1-p1p-commutator")]
    deg1 = sph.sigma_set(1, q)
    for phi in deg1:
        for key in ("regular-pair-commutator", "regular-pair-products", "x-r1p-commutator", "x-r2p-commutator"):
            out.append(_identity_case(s, key, q, phi=phi))
        for n in range(n_max + 1):
            out.append(_identity_case(s, "x-p-qcommutator", q, bound=(8, 8), n=n, phi=phi))
            out.append(_identity_case(s, "i-x-qcommutator", q, bound=(8, 8), n=n, phi=phi))
        for n in range(n_max):
            out.append(_identity_case(s, "pp-x-qcommutator", q, bound=(8, 8), n=n, phi=phi))
            out.append(_identity_case(s, "x-ip-qcommutator", q, bound=(8, 8), n=n, phi=phi))
    for m in range(1, 3):
        for n in range(1, 3):
            out.append(_identity_case(s, "regular-commute", q, phi=deg1[0], m=m, n=n, side="same"))
            out.append(_identity_case(s, "regular-commute", q, phi=deg1[0], pi=deg1[1], m=m, n=n, side="opposite"))
    out.append(_identity_case(s, "m-central", q, max_dim=(2, 2)))
    out.append(_identity_case(s, "sum-coefficient", q, max_dim=(2, 2)))
    for m in range(n_max + 1):
        for n in range(n_max + 1):
            if m >= n:
                out.append(_identity_case(s, "a-reordering", q, bound=(8, 8), m=m, n=n))
            if m <= n:
                out.append(_identity_case(s, "b-reordering", q, bound=(8, 8), m=m, n=n))
            if m + n <= n_max:
                out.append(_identity_case(s, "ba-commutator", q, bound=(8, 8), m=m, n=n))
    return out


def szanto_cases(q: int, max_index: int = 3) -> list[Case]:
    out = []
    for n in range(1, max_index + 1):
        for i in range(n):
            out.append(_identity_case("szanto", "kronecker-ip-product", q, bound=(8, 8), n=n, i=i))
    for n in range(1, max_index):
        for m in range(max_index):
            out.append(_identity_case("szanto", "kronecker-rp-product", q, bound=(8, 8), n=n, m=m))
    return out


def heisenberg_cases(q: int, max_index: int = 2) -> list[Case]:
    s = "heisenberg"
    out = []
    phis = sph.sigma_set(1, q) + sph.sigma_set(2, q)
    for phi in phis:
        for m in range(1, max_index + 1):
            for n in range(1, max_index + 1):
                out.append(_identity_case(s, "heisenberg-commutator", q, bound=(8, 8), phi=phi, m=m, n=n))
    deg1 = sph.sigma_set(1, q)
    if len(deg1) > 1:
        out.append(_identity_case(s, "heisenberg-commutator", q, bound=(8, 8), phi=deg1[0], pi=deg1[1], m=1, n=1))
    for phi in deg1:
        for m in range(1, max_index + 1):
            for n in range(1, max_index + 1):
                out.append(_identity_case(s, "regular-pm-reordering", q, bound=(8, 8), phi=phi, m=m, n=n))
                out.append(_identity_case(s, "regular-reordering", q, bound=(8, 8), phi=phi, m=m, n=n))
    for k in range(-max_index, max_index + 1):
        if k:
            out.append(_identity_case(s, "h-from-heisenberg", q, bound=(8, 8), k=k))
    for l, k in itertools.product(range(-max_index, max_index + 1), repeat=2):
        if l and k:
            out.append(_identity_case(s, "h-commutator-via-heisenberg", q, bound=(8, 8), l=l, k=k))
    return out


def ckconst_cases(q: int) -> list[Case]:
    out = []
    for phi in sph.sigma_set(1, q):
        for m in range(1, 3):
            for n in range(1, 3):
                out.append(_identity_case("heisenberg", "regular-pair-coefficients", q, bound=(8, 8), phi=phi, m=m, n=n))
                out.append(_identity_case("heisenberg", "regular-pair-expansion", q, bound=(8, 8), phi=phi, m=m, n=n))
    if q == 2:
        for phi in sph.sigma_set(2, q):
            out.append(_identity_case("heisenberg", "regular-pair-coefficients", q, bound=(8, 8), phi=phi, m=1, n=1))
    return out


def spherical_cases(q: int) -> list[Case]:
    s = "spherical"
    out = [_identity_case(s, "theta-small", q, beta=b) for b in ((1, 0), (0, 1), (0, 2), (1, 1), (2, 2))]
    if q == 2:
        for d in (1, 2):
            for m in (1, 2):
                for neg in (False, True):
                    out.append(_identity_case(s, "theta-sloped", q, bound=(8, 8), d=d, m=m, negative=neg))
        out.append(_identity_case(s, "theta-equidimensional", q, m=3))
        out.append(_identity_case(s, "theta-refined-22", q))
        out.append(_identity_case(s, "minimizer-qcommute", q, max_dim=(3, 3)))
    return out


# ---------------------------------------------------------------------------
# quantum side


def theta_cases(q: int, window: int = 2) -> list[Case]:
    idx = [i for i in range(-window, window + 1)]
    nz = [i for i in idx if i]
    out = []

    def add(key, **p):
        out.append(Case("theta", key, p, q, lambda: qa.theta_relation(key, q, **p),
                        f"defining relation {key} on the Hall images", (8, 8)))

    for k in idx:
        add("c-central", k=k, n=(k or 1))
        add("s-e-conjugation", k=k)
        add("s-f-conjugation", k=k)
    add("s-squared")
    for n in nz:
        add("s-h-commute", n=n)
    for k, l in itertools.product(idx, repeat=2):
        add("e-reordering", k=k, l=l)
        add("f-reordering", k=k, l=l)
        add("e-f-commutator", k=k, l=l)
    for n in nz:
        for k in idx:
            add("h-e-commutator", n=n, k=k)
            add("h-f-commutator", n=n, k=k)
    for l, k in itertools.product(nz, repeat=2):
        add("h-h-commutator", l=l, k=k)
    return out


def theta_homomorphism_cases(q: int, count: int = 100, seed: int = 0, lo: int = -1, hi: int = 1) -> list[Case]:
    """``theta(normalize(xy)) = theta(x) theta(y)`` for random pairs of generators."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        x = qa.random_word(rng, 1, lo, hi)
        y = qa.random_word(rng, 1, lo, hi)

        def check(x=x, y=y):
            lhs = qa.theta_evaluate(qa.pbw_normalize(x + y, (1, 1)), q)
            return lhs == qa.theta_word(x, q).twisted_product(qa.theta_word(y, q))

        out.append(Case("theta", "homomorphism", {"x": x, "y": y}, q, check,
                        "theta of the normal form of xy equals theta(x) theta(y)", (8, 8)))
    return out


def pbw_cases(shifts=(1, 1), window: int = 2) -> list[Case]:
    idx = list(range(-window, window + 1))
    nz = [i for i in idx if i]
    out = []

    def add(key, **p):
        out.append(Case("pbw", key, dict(p, shifts=list(shifts)), None,
                        lambda: qa.verify_qa_relation(key, tuple(shifts), **p),
                        f"defining relation {key} normalizes to zero"))

    for k in idx:
        add("c-central", k=k, n=(k or 1))
        add("s-e-conjugation", k=k)
        add("s-f-conjugation", k=k)
    add("s-squared")
    for n in nz:
        add("s-h-commute", n=n)
    for k, l in itertools.product(idx, repeat=2):
        add("e-reordering", k=k, l=l)
        add("f-reordering", k=k, l=l)
        add("e-f-commutator", k=k, l=l)
    for n in nz:
        for k in idx:
            add("h-e-commutator", n=n, k=k)
            add("h-f-commutator", n=n, k=k)
    for l, k in itertools.product(nz, repeat=2):
        add("h-h-commutator", l=l, k=k)
    return out


def finpres_cases(d: int = 2, window: int = 3) -> list[Case]:
    return [Case("finpres", "finite-presentation", {"d": d, "window": window}, None,
                 lambda: qa.finite_presentation_check(d, window).ok,
                 "recursive generators match and every listed relation normalizes to zero")]


def suite_cases(name: str, q: int = 2, max_index: int = 3, window: int = 2, d: int = 2,
                shifts=(1, 1)) -> list[Case]:
    if name == "relsummary":
        return relsummary_cases(q, max_index)
    if name == "szanto":
        return szanto_cases(q, max_index)
    if name == "heisenberg":
        return ckconst_cases(q) + heisenberg_cases(q, min(max_index, 2))
    if name == "spherical":
        return spherical_cases(q)
    if name == "theta":
        return theta_cases(q, window)
    if name == "pbw":
        return pbw_cases(tuple(shifts), window)
    if name == "finpres":
        return finpres_cases(d, max(window, 3))
    raise UnknownSuite(name)


__all__ = ["SUITES", "Case", "UnknownSuite", "suite_cases", "relsummary_cases", "szanto_cases",
           "heisenberg_cases", "ckconst_cases", "spherical_cases", "theta_cases", "theta_homomorphism_cases",
           "pbw_cases", "finpres_cases"]
