"""Command-line entry point: ``chatelet <subcommand> ...``.

Exit codes: 0 ok, 1 verification failure, 2 reducible polynomial,
3 parity conditions fail, 64 usage error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import harness
from .errors import EffortExceeded, ParityViolation, Reducible
from .oracle import count_B, is_sum_two_squares
from .ring import CubicPoly, IntPoly, validate_poly

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_REDUCIBLE = 2
EXIT_PARITY = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _poly_arg(text: str) -> tuple[int, int, int]:
    try:
        a2, a1, a0 = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a2,a1,a0 integers, got {text!r}")
    return a2, a1, a0


def _int_arg(text: str) -> int:
    # accepts 10**6 style exponents and 1e6 for convenience
    t = text.replace("_", "")
    try:
        if "**" in t:
            base, exp = t.split("**")
            return int(base) ** int(exp)
        if "e" in t.lower():
            mant, exp = t.lower().split("e")
            return int(mant) * 10 ** int(exp)
        return int(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")


def _grid_arg(text: str) -> list[int]:
    return [_int_arg(t) for t in text.split(",") if t.strip()]


def _fraction_arg(text: str) -> Fraction:
    try:
        c = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}")
    if c <= 0:
        raise argparse.ArgumentTypeError("c must be positive")
    return c


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chatelet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def poly(p):
        p.add_argument("--poly", type=_poly_arg, required=True, metavar="a2,a1,a0")

    p = sub.add_parser("check", help="validate a cubic: irreducibility, parity, theta interval")
    poly(p)

    p = sub.add_parser("construct", help="enumerate and certify family members")
    poly(p)
    p.add_argument("--limit", type=_int_arg, required=True, metavar="X")
    p.add_argument("--c", type=_fraction_arg, default=Fraction(1))
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--emit", metavar="PATH", help="JSON-lines output (default: stdout)")
    p.add_argument("--csv", metavar="PATH", help="write the summary CSV row here as well")
    p.add_argument(
        "--oracle-limit",
        type=_int_arg,
        default=harness.DEFAULT_ORACLE_LIMIT,
        help="factor p(n) only when |n| is at most this (default 10**9)",
    )

    p = sub.add_parser("count", help="brute-force count of n in [1, X] with p(n) a sum of two squares")
    poly(p)
    p.add_argument("--limit", type=_int_arg, required=True, metavar="X")
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--emit", metavar="PATH", help="CSV output (default: stdout)")

    p = sub.add_parser("fit", help="constructive counts over an X grid and the log-log slope")
    poly(p)
    p.add_argument("--grid", type=_grid_arg, required=True, metavar="X1,X2,...")
    p.add_argument("--c", type=_fraction_arg, default=Fraction(1))
    p.add_argument("--cutoff", type=_int_arg, default=harness.DEFAULT_CUTOFF, metavar="N")
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--emit", metavar="PATH", help="CSV output (default: stdout)")

    sub.add_parser("verify-identity", help="check (x^2+8)^3+17 = (x^3+10x)^2+(2x^2+23)^2")

    p = sub.add_parser("oracle", help="is n a sum of two squares?")
    p.add_argument("n", type=_int_arg)
    return parser


def _load_poly(coeffs, relaxed=False) -> CubicPoly:
    return validate_poly(*coeffs, relaxed=relaxed)


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        harness.write_atomic(path, text)
    else:
        sys.stdout.write(text)


def cmd_check(args) -> int:
    a2, a1, a0 = args.poly
    try:
        p = _load_poly(args.poly, relaxed=True)
    except Reducible as e:
        print(f"poly: {IntPoly((a0, a1, a2, 1))}")
        print(f"irreducible: no (integer root {e.root})")
        return EXIT_REDUCIBLE
    lo, hi = p.theta_interval
    print(f"poly: {p}")
    print("irreducible: yes")
    print(f"a2^2-a1 = {a2 * a2 - a1}: {'even' if p.even_condition else 'odd'} ({'ok' if p.even_condition else 'FAIL'})")
    print(f"a1*a2-a0 = {a1 * a2 - a0}: {'odd' if p.odd_condition else 'even'} ({'ok' if p.odd_condition else 'FAIL'})")
    print(f"theta in [{lo}, {hi}] (~{float(lo):.12f})")
    if not p.parity_ok:
        print("construction applies: no")
        return EXIT_PARITY
    print("construction applies: yes")
    return EXIT_OK


def cmd_construct(args) -> int:
    p = _load_poly(args.poly)
    if args.shards < 1:
        raise UsageError("--shards must be >= 1")
    run = harness.construct(p, args.limit, args.c, args.shards, args.oracle_limit)
    _emit(harness.jsonl_text(run.records), args.emit)
    row = run.row
    if args.csv:
        harness.write_atomic(args.csv, harness.csv_text([row]))
    out = sys.stderr if not args.emit else sys.stdout
    print(harness.csv_text([row]), end="", file=out)
    print(
        f"# emitted {row.emitted} with |n| <= X ({row.abs_window_distinct} distinct); "
        f"{row.constructive_total} in [1, X] ({row.constructive_distinct} distinct, "
        f"max multiplicity {row.max_multiplicity}, histogram {run.multiplicity.histogram})",
        file=out,
    )
    print(
        f"# oracle: {run.oracle_confirmed} confirmed, {run.oracle_skipped} skipped, "
        f"{run.oracle_budget} over budget, {len(run.oracle_failures)} failed; "
        f"v1-class size bound violations: {len(run.class_bound_violations)}",
        file=out,
    )
    if run.oracle_failures or run.class_bound_violations:
        return EXIT_VERIFY
    return EXIT_OK


def cmd_count(args) -> int:
    if args.limit < 1:
        raise UsageError("--limit must be >= 1")
    if args.shards < 1:
        raise UsageError("--shards must be >= 1")
    p = _load_poly(args.poly, relaxed=True)
    try:
        value = count_B(p, args.limit, args.shards)
    except EffortExceeded as e:
        print(f"factorization budget exceeded at n = {e.at} (cofactor {e.cofactor})", file=sys.stderr)
        return EXIT_VERIFY
    row = harness.DensityRow(p.label, args.limit, None, value)
    _emit(harness.csv_text([row]), args.emit)
    print(f"count_B = {value}", file=sys.stderr)
    return EXIT_OK


def cmd_fit(args) -> int:
    if len(args.grid) < 3:
        raise UsageError("--grid needs at least 3 points")
    if any(x < 1 for x in args.grid):
        raise UsageError("grid values must be >= 1")
    p = _load_poly(args.poly)
    report = harness.fit(p, args.grid, args.c, args.cutoff, args.shards)
    _emit(harness.csv_text(report.rows), args.emit)
    print(f"slope = {report.slope:.6f} (rms residual {report.residual:.6f})", file=sys.stderr)
    for r in report.rows:
        if r.count_B is not None and not r.constructive_distinct <= r.count_B:
            print(f"count bound violated at X = {r.X}", file=sys.stderr)
            return EXIT_VERIFY
    return EXIT_OK


def cmd_verify_identity(args) -> int:
    msg = harness.verify_identity()
    if msg:
        print(f"FAIL: {msg}")
        return EXIT_VERIFY
    lhs, _ = harness.identity_sides()
    print(f"ok: (x^2+8)^3+17 = {lhs} on both sides; checked x in [-1000, 1000]")
    return EXIT_OK


def cmd_oracle(args) -> int:
    print(is_sum_two_squares(args.n))
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "construct": cmd_construct,
    "count": cmd_count,
    "fit": cmd_fit,
    "verify-identity": cmd_verify_identity,
    "oracle": cmd_oracle,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"chatelet: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Reducible as e:
        print(f"reducible: integer root {e.root}", file=sys.stderr)
        return EXIT_REDUCIBLE
    except ParityViolation as e:
        print(f"parity: {e}", file=sys.stderr)
        return EXIT_PARITY
    except EffortExceeded as e:
        print(str(e), file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
