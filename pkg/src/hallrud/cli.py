"""Command-line interface.

Exit codes: 0 success, 1 an identity or fit failed, 2 usage error, 3 the
requested computation exceeds the dimension bound.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .hall import DEFAULT_BOUND, HallElem, ResourceBoundError, dimension_bound, flush_disk_cache
from .scalars import PrimePower, qscalar_text

SCHEMA_VERSION = 1
HARD_CAP = (4, 4)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BOUND = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two comma-separated integers, got {text!r}")
    return a, b


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _prime_power(text: str) -> int:
    try:
        q = int(text)
        PrimePower.from_q(q)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a prime power")
    return q


def _short(x) -> str:
    """Compact text for a quarter-power scalar: only the nonzero components."""
    names = ("", "u", "u^2", "u^3")
    parts = [(c, n) for c, n in zip(x.c, names) if c]
    if not parts:
        return "0"
    return " + ".join(str(c) if not n else (n if c == 1 else f"{c}*{n}") for c, n in parts)


def _emit(args, payload: dict, table_rows: list[str]) -> None:
    if args.format == "json":
        payload = {"schema": SCHEMA_VERSION, **payload}
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for row in table_rows:
            print(row)


def _bound(args) -> tuple[int, int]:
    b = tuple(args.bound) if args.bound else DEFAULT_BOUND
    if not args.allow_large and (b[0] > HARD_CAP[0] or b[1] > HARD_CAP[1]):
        raise UsageError(f"bound {b} exceeds the cap {HARD_CAP}; pass --allow-large to override")
    return b


# ---------------------------------------------------------------------------
# subcommands


def cmd_product(args) -> int:
    from .catalog import parse_isoclass

    try:
        X, Y = parse_isoclass(args.x), parse_isoclass(args.y)
    except (ValueError, KeyError) as exc:
        raise UsageError(f"cannot parse iso class: {exc}")
    with dimension_bound(_bound(args)):
        x, y = HallElem.basis(args.q, X), HallElem.basis(args.q, Y)
        z = x.twisted_product(y) if args.twisted else x.product(y)
    terms = z.items()
    _emit(args, {"command": "product", "q": args.q, "x": str(X), "y": str(Y), "twisted": args.twisted,
                 "terms": z.to_json()},
          [f"{_short(c):>24}  {k}" for k, c in terms] or ["0"])
    return EXIT_OK


def _run_case(spec) -> dict:
    from .suites import suite_cases

    (name, q, max_index, window, d, shifts), idx = spec
    case = suite_cases(name, q=q, max_index=max_index, window=window, d=d, shifts=shifts)[idx]
    out = case.run()
    flush_disk_cache()
    return out


def cmd_verify(args) -> int:
    from .suites import SUITES, suite_cases

    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    shifts = tuple(args.shifts)
    conf = (args.suite, args.q, args.max, args.window, args.d, shifts)
    cases = suite_cases(args.suite, q=args.q, max_index=args.max, window=args.window, d=args.d, shifts=shifts)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_case, [(conf, i) for i in range(len(cases))]))
    else:
        results = [c.run() for c in cases]
    results.sort(key=lambda r: (r["key"], json.dumps(r["params"], sort_keys=True)))
    failures = [r for r in results if not r["holds"]]
    rows = [f"{'PASS' if r['holds'] else 'FAIL'}  {r['key']} {json.dumps(r['params'], sort_keys=True)}"
            for r in results]
    rows.append(f"{len(results) - len(failures)}/{len(results)} hold")
    _emit(args, {"command": "verify", "suite": args.suite, "q": args.q, "ok": not failures,
                 "count": len(results), "failures": len(failures), "cases": results}, rows)
    return EXIT_OK if not failures else EXIT_FAIL


def cmd_classify(args) -> int:
    from .catalog import IsoClass
    from .quiver import check_relations, decompose, rep_from_json

    try:
        with open(args.rep) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read representation: {exc}")
    data.setdefault("q", args.q)
    try:
        R = rep_from_json(data)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"malformed representation: {exc}")
    if not check_relations(R):
        raise UsageError("representation violates the quiver relations")
    labels = decompose(R)
    cls = IsoClass(labels)
    _emit(args, {"command": "classify", "q": R.field.q, "dim": list(R.dim), "class": str(cls),
                 "labels": [str(L) for L in labels]}, [str(cls)])
    return EXIT_OK


def cmd_theta_beta(args) -> int:
    from .spherical import theta_beta

    with dimension_bound(_bound(args)):
        rep = theta_beta(tuple(args.dim), args.q, refined=args.refined)
    rows = [f"min c = {rep.minC}", "minimizers: " + ", ".join(str(X) for X, _ in rep.minimizers)]
    rows += [f"{_short(c):>24}  {k}" for k, c in rep.thetaElem.items()]
    _emit(args, {"command": "theta-beta", "q": args.q, **rep.to_json()}, rows)
    return EXIT_OK


def cmd_interp(args) -> int:
    from .interp import InsufficientSamples, NonIntegralFit, structure_constant_poly

    try:
        with dimension_bound(_bound(args)):
            fit = structure_constant_poly(args.x, args.y, args.z, args.qs, args.holdout, twisted=args.twisted)
    except InsufficientSamples as exc:
        raise UsageError(str(exc))
    except NonIntegralFit as exc:
        _emit(args, {"command": "interp", "ok": False, "reason": str(exc),
                     "samples": [{"q": q, "value": qscalar_text(v)} for q, v in exc.samples]},
              [f"FAIL  {exc}"])
        return EXIT_FAIL
    _emit(args, {"command": "interp", "ok": fit.validated, **fit.to_json()},
          [fit.polynomial, f"holdout q={fit.holdout}: {'ok' if fit.validated else 'MISMATCH'}"])
    return EXIT_OK if fit.validated else EXIT_FAIL


def cmd_express(args) -> int:
    from .spherical import NotInSubalgebra, express_in_spherical_basis, parse_word_element

    try:
        with dimension_bound(_bound(args)):
            x = parse_word_element(args.word, args.q, twisted=args.twisted)
            coords = express_in_spherical_basis(x, twisted=args.twisted)
    except ValueError as exc:
        if isinstance(exc, NotInSubalgebra):
            _emit(args, {"command": "express", "ok": False, "reason": str(exc)}, [f"FAIL  {exc}"])
            return EXIT_FAIL
        raise UsageError(str(exc))
    items = sorted(coords.items(), key=lambda kv: str(kv[0]))
    _emit(args, {"command": "express", "q": args.q, "word": args.word, "twisted": args.twisted,
                 "terms": [{"monomial": str(m), "coeff": qscalar_text(c)} for m, c in items]},
          [f"{_short(c):>24}  {m}" for m, c in items] or ["0"])
    return EXIT_OK


def cmd_normalize(args) -> int:
    from .quantum import parse_word, pbw_normalize

    try:
        word = parse_word(args.word)
    except ValueError as exc:
        raise UsageError(str(exc))
    x = pbw_normalize(word, tuple(args.shifts))
    rows = [f"{c}  {m}" for m, c in x.items()] or ["0"]
    _emit(args, {"command": "normalize", "shifts": list(args.shifts), "word": args.word,
                 "result": x.to_json()}, rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hallrud", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=_prime_power, default=2, help="field size (prime power)")
    common.add_argument("--bound", type=_pair, default=None, help="dimension bound d1,d2 (default 4,4)")
    common.add_argument("--allow-large", action="store_true", help="permit bounds above the 4,4 cap")
    common.add_argument("--format", choices=("json", "table"), default="table")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("product", parents=[common], help="product of two iso classes")
    s.add_argument("x")
    s.add_argument("y")
    s.add_argument("--twisted", action="store_true")
    s.set_defaults(func=cmd_product)

    s = sub.add_parser("verify", parents=[common], help="run an identity suite")
    s.add_argument("--suite", required=True)
    s.add_argument("--max", type=int, default=3, help="largest sequence index")
    s.add_argument("--window", type=int, default=2, help="index window for generator relations")
    s.add_argument("--d", type=int, default=2, help="shift for the finite presentation")
    s.add_argument("--shifts", type=_pair, default=(1, 1))
    s.add_argument("--jobs", type=int, default=1, help="worker processes")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("classify", parents=[common], help="decompose a representation given as JSON")
    s.add_argument("--rep", required=True)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("theta-beta", parents=[common], help="minimizers and Theta for a dimension vector")
    s.add_argument("--dim", type=_pair, required=True)
    s.add_argument("--refined", action="store_true")
    s.set_defaults(func=cmd_theta_beta)

    s = sub.add_parser("interp", parents=[common], help="fit a structure constant as a Laurent polynomial")
    s.add_argument("--x", required=True)
    s.add_argument("--y", required=True)
    s.add_argument("--z", required=True)
    s.add_argument("--qs", type=_int_list, default=[2, 3, 5])
    s.add_argument("--holdout", type=int, default=7)
    s.add_argument("--twisted", action="store_true")
    s.set_defaults(func=cmd_interp)

    s = sub.add_parser("express", parents=[common], help="coordinates of a generator word in the monomial basis")
    s.add_argument("word")
    s.add_argument("--twisted", action="store_true")
    s.set_defaults(func=cmd_express)

    s = sub.add_parser("normalize", help="PBW normal form of a word in the quantum generators")
    s.add_argument("word")
    s.add_argument("--shifts", type=_pair, default=(1, 1))
    s.add_argument("--format", choices=("json", "table"), default="table")
    s.set_defaults(func=cmd_normalize)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceBoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND


if __name__ == "__main__":
    sys.exit(main())
