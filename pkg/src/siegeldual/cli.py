"""Command-line driver.

Exit codes: 0 success, 1 mathematical failure (a check failed or an
operation hit a math error), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .errors import (
    InternalRankMismatch,
    NotInSpan,
    ParseError,
    SiegelError,
    SpanFailure,
    SystemInconsistent,
)
from .exact.fields import RationalFunctionField, parse_field
from .exact.series import theta_shift
from .generate import random_lattice, random_partition, random_siegel
from .lattice import LatticeInstance, arrange_segments, extract_siegel, roundtrip_dual
from .partitions import jordan_data
from .serialize import from_json, lattice_to_json, series_to_json, siegel_to_json, to_json
from .siegel import SiegelObject, compute_P, dual_siegel
from .verify import CHECKS, RunConfig, run_verify

MATH_ERRORS = (SpanFailure, InternalRankMismatch, NotInSpan, SystemInconsistent, ArithmeticError)


class UsageError(Exception):
    pass


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None


def _read_input(path: str):
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
    except OSError as exc:
        raise UsageError(str(exc)) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return from_json(doc)


def _emit(doc: dict, out: str | None):
    text = json.dumps(doc, indent=1) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _siegel_of(obj) -> SiegelObject:
    if isinstance(obj, SiegelObject):
        return obj
    if isinstance(obj, LatticeInstance):
        return extract_siegel(obj, arrange_segments(obj))
    raise UsageError(f"expected a Siegel object or a lattice, got {type(obj).__name__}")


# ---------------------------------------------------------------------------


def cmd_gen(args) -> int:
    field = parse_field(args.field)
    rng = random.Random(args.seed)
    if args.mode == "siegel":
        if args.k is None:
            raise UsageError("--mode siegel needs --k")
        if args.m is not None and len(args.k) != args.m + 1:
            raise UsageError(f"--k needs m + 1 = {args.m + 1} entries")
        S = random_siegel(field, args.k, rng, args.bound, args.degree)
        _emit(siegel_to_json(S), args.out)
        return 0
    if args.m is None:
        raise UsageError("--mode lattice needs --m")
    if args.d is not None:
        r = args.r if args.r is not None else len(args.d)
        jd = jordan_data(args.d, args.m, r)
    else:
        r = args.r if args.r is not None else 3
        jd = random_partition(args.m, r, rng)
    L = random_lattice(field, jd, rng, args.bound, args.degree, args.retries)
    if L is None:
        print(f"no lattice satisfying the spanning condition after {args.retries} tries", file=sys.stderr)
        return 1
    _emit(lattice_to_json(L), args.out)
    return 0


def cmd_extract(args) -> int:
    obj = _read_input(args.input)
    if not isinstance(obj, LatticeInstance):
        raise UsageError("extract expects a lattice instance")
    _emit(siegel_to_json(_siegel_of(obj)), args.out)
    return 0


def cmd_p(args) -> int:
    _emit(to_json(compute_P(_siegel_of(_read_input(args.input)))), args.out)
    return 0


def cmd_dualize(args) -> int:
    _emit(siegel_to_json(dual_siegel(_siegel_of(_read_input(args.input)))), args.out)
    return 0


def cmd_expand(args) -> int:
    coeff_field = parse_field(args.field)
    F = RationalFunctionField(coeff_field, args.var)
    f = F(args.expr)
    _emit(series_to_json(theta_shift(f, args.order)), args.out)
    return 0


def cmd_roundtrip(args) -> int:
    obj = _read_input(args.input)
    if not isinstance(obj, LatticeInstance):
        raise UsageError("roundtrip expects a lattice instance")
    rep = roundtrip_dual(obj, args.method)
    doc = {k: v for k, v in rep.items() if k not in ("siegel", "dual_siegel")}
    if "siegel" in rep:
        doc["siegel"] = siegel_to_json(rep["siegel"])
        doc["dual_siegel"] = siegel_to_json(rep["dual_siegel"])
    _emit(doc, args.out)
    return 1 if rep["status"] == "fail" else 0


def cmd_verify(args) -> int:
    try:
        cfg = RunConfig(seed=args.seed, field=args.field, m=args.m, k=args.k, trials=args.trials,
                        bound=args.bound, degree=args.degree, max_r=args.max_r,
                        checks=tuple(args.checks) if args.checks else CHECKS, jobs=args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = run_verify(cfg)
    _emit(report.to_json(timing=not args.no_timing), args.out)
    s = report.summary()
    print(f"{s['status']}: {s['pass']} passed, {s['fail']} failed, {s['skipped']} skipped", file=sys.stderr)
    return 0 if report.status == "pass" else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="siegeldual", description="Siegel objects of lattices with a nilpotent operator and their duals.")
    sub = p.add_subparsers(dest="command", required=True)

    def add_io(sp, with_input=True):
        if with_input:
            sp.add_argument("input", nargs="?", default="-", help="JSON file (default: stdin)")
        sp.add_argument("--out", help="write JSON here instead of stdout")

    def add_random(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--bound", type=int, default=2, help="coefficient box for random entries")
        sp.add_argument("--degree", type=int, default=1, help="max numerator/denominator degree")

    g = sub.add_parser("gen", help="random Siegel object or lattice instance")
    g.add_argument("--mode", choices=("siegel", "lattice"), default="siegel")
    g.add_argument("--m", type=int)
    g.add_argument("--k", type=_ints)
    g.add_argument("--d", type=_ints)
    g.add_argument("--r", type=int)
    g.add_argument("--field", default="Qt")
    g.add_argument("--retries", type=int, default=20)
    add_random(g)
    add_io(g, with_input=False)
    g.set_defaults(func=cmd_gen)

    for name, fn, text in (("extract", cmd_extract, "Siegel object of a lattice"),
                           ("p", cmd_p, "P table of a Siegel object or lattice"),
                           ("dualize", cmd_dualize, "dual Siegel object")):
        sp = sub.add_parser(name, help=text)
        add_io(sp)
        sp.set_defaults(func=fn)

    rt = sub.add_parser("roundtrip", help="compare the dual lattice's Siegel object with the dual")
    rt.add_argument("--method", choices=("chains", "nullspace"), default="chains")
    add_io(rt)
    rt.set_defaults(func=cmd_roundtrip)

    e = sub.add_parser("expand", help="Laurent expansion of f(T) at T = theta")
    e.add_argument("expr")
    e.add_argument("--order", type=int, default=5)
    e.add_argument("--field", default="Qt", help="coefficient field containing theta")
    e.add_argument("--var", default="T")
    add_io(e, with_input=False)
    e.set_defaults(func=cmd_expand)

    v = sub.add_parser("verify", help="run the identity suite on random instances")
    v.add_argument("--m", type=int, default=2)
    v.add_argument("--k", type=_ints)
    v.add_argument("--trials", type=int, default=10)
    v.add_argument("--field", default="rationals")
    v.add_argument("--max-r", type=int, default=6)
    v.add_argument("--checks", nargs="+", choices=CHECKS)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--no-timing", action="store_true", help="zero the durations for byte-stable output")
    add_random(v)
    add_io(v, with_input=False)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except MATH_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (UsageError, ParseError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SiegelError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
