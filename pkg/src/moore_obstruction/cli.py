"""Command-line front end.

Exit codes: 0 success, 2 internal cross-check failure, 64 usage error,
74 I/O error. Data goes to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import selftest
from .exact_arith import as_rational, check_prime, format_rational, multiplicative_order
from .ktheory import fixed_subspace, psi_matrix, residual, solve_fixed_series
from .obstruction import (
    P2_GENERATOR,
    InternalConsistencyError,
    an_bound,
    an_bound_p2,
    find_generator,
    verify_theorem,
)

EX_OK = 0
EX_CROSSCHECK = 2
EX_USAGE = 64
EX_IOERR = 74

FORMAT_ENV = "MOORE_OBSTRUCTION_FORMAT"
FORMATS = ("text", "json", "csv")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r} ({exc})")


def _prime_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma list of integers: {text!r}")


def _require_prime(p: int) -> None:
    try:
        check_prime(p)
    except ValueError as exc:  # NotPrimeError, or out of the primality test's range
        raise UsageError(str(exc))


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def _report_text(r) -> str:
    vals = " ".join(f"{i}:{v}" for i, v in r.valuations)
    return (
        f"p={r.p} k={r.k} c={format_rational(r.c)} "
        f"first_failure={r.first_failure} n_max={r.n_max}\n"
        f"valuations {vals}"
    )


def cmd_verify(args) -> int:
    p, k = args.p, args.k
    _require_prime(p)
    if k < 1 or (p == 2 and k < 2):
        raise UsageError("k must be >= 1 (and > 1 when p = 2)")
    result = verify_theorem(p, k)
    if args.format == "json":
        if p == 2:
            out = _dump({"lower": result.report.to_json(), "upper": result.upper.to_json()})
        else:
            out = _dump(result.report.to_json())
    elif args.format == "csv":
        rows = [result.report] + ([result.upper] if result.upper else [])
        out = "p,k,c,first_failure,n_max\n" + "\n".join(r.csv_row() for r in rows)
    else:
        if p == 2:
            out = (
                f"M_2({k + 1}): A_{2**k - 1} realized, A_{2 ** (k + 1)} obstructed\n"
                f"lower {_report_text(result.report)}\n"
                f"upper {_report_text(result.upper)}"
            )
        else:
            out = f"M_{p}({k}): A_n iff n <= {result.report.n_max}\n{_report_text(result.report)}"
    print(out)
    if not result.agreed:
        print("error: solver and log-series routes disagree", file=sys.stderr)
        return EX_CROSSCHECK
    return EX_OK


def cmd_solve(args) -> int:
    if args.q <= 1:
        raise UsageError("q must be > 1")
    if args.m < 2:
        raise UsageError("m must be >= 2")
    f = solve_fixed_series(args.q, args.m, args.a1)
    ok = residual(f, args.q).is_zero()
    if args.format == "json":
        print(_dump({**f.to_json(), "residual_zero": ok}))
    else:
        print(f.format_terms() + f" mod x^{f.modulus}")
        print(f"residual: {'0' if ok else 'NONZERO'}")
    return EX_OK if ok else EX_CROSSCHECK


def _table_rows(primes: list[int], kmax: int):
    for p in sorted(set(primes)):
        for k in range(1, kmax + 1):
            if p == 2:
                if k < 2:
                    continue
                lower, upper = an_bound_p2(k)
                yield "lower", lower
                yield "upper", upper
            else:
                yield "sharp", an_bound(p, k)


def cmd_table(args) -> int:
    for p in args.p:
        _require_prime(p)
    if not args.p:
        raise UsageError("no primes given")
    if args.kmax < 1:
        raise UsageError("kmax must be >= 1")
    rows = list(_table_rows(args.p, args.kmax))
    if args.format == "json":
        doc = []
        for bound, r in rows:
            entry = r.to_json()
            del entry["valuations"]
            entry["bound"] = bound
            doc.append(entry)
        text = _dump(doc) + "\n"
    else:
        text = "p,k,c,first_failure,n_max\n" + "".join(r.csv_row() + "\n" for _, r in rows)
    if args.out is None or args.out == "-":
        sys.stdout.write(text)
        return EX_OK
    try:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EX_IOERR
    return EX_OK


def cmd_generator(args) -> int:
    p = args.p
    _require_prime(p)
    if p == 2:
        if args.format == "json":
            print(_dump({"p": 2, "q": P2_GENERATOR, "convention": True}))
        else:
            print(f"{P2_GENERATOR} (fixed by convention)")
        return EX_OK
    q = find_generator(p)
    order = multiplicative_order(q, p * p)
    if args.format == "json":
        print(_dump({"p": p, "q": q, "order": order, "modulus": p * p}))
    else:
        print(f"{q} (order {order} mod {p * p})")
    return EX_OK


def cmd_matrix(args) -> int:
    if args.q < 2 or args.n < 1:
        raise UsageError("need q >= 2 and n >= 1")
    mat = psi_matrix(args.q, args.n)
    kernel = fixed_subspace(args.q, args.n)
    kernel_str = [[format_rational(x) for x in v] for v in kernel]
    if args.format == "json":
        print(_dump({**mat.to_json(), "kernel": kernel_str, "dim": len(kernel)}))
    else:
        for row in mat.entries:
            print("[" + ", ".join(format_rational(x) for x in row) + "]")
        print("kernel [" + ", ".join("(" + ", ".join(v) + ")" for v in kernel_str) + "]")
        print(f"dim {len(kernel)}")
    return EX_OK


def build_parser() -> argparse.ArgumentParser:
    default_format = os.environ.get(FORMAT_ENV, "text")
    if default_format not in FORMATS:
        default_format = "text"

    parser = _Parser(
        prog="moore-obstruction",
        description="A_n-structure bounds for mod p^k Moore spectra via K-theory integrality.",
    )
    parser.add_argument("--selftest", action="store_true", help="run the embedded invariant suite")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def fmt(sp):
        sp.add_argument("--format", choices=FORMATS, default=default_format)

    sp = sub.add_parser("verify", help="check the A_n bound two independent ways")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    fmt(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("solve", help="solve f((1+x)^q - 1) = q f(x) mod x^m")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--a1", type=_rational, default=Fraction(1))
    fmt(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("table", help="grid of bounds over primes and k")
    sp.add_argument("--p", type=_prime_list, required=True, help="comma-separated primes")
    sp.add_argument("--kmax", type=int, required=True)
    sp.add_argument("--out", default=None, help="output path (default stdout)")
    fmt(sp)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("generator", help="topological generator of Z_p^x")
    sp.add_argument("--p", type=int, required=True)
    fmt(sp)
    sp.set_defaults(func=cmd_generator)

    sp = sub.add_parser("matrix", help="psi_q matrix on ku^2(CP^n) and its fixed subspace")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    fmt(sp)
    sp.set_defaults(func=cmd_matrix)

    return parser


def run_selftest() -> int:
    results = list(selftest.run())
    for name, ok in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    passed = sum(ok for _, ok in results)
    print(f"{passed} passed, {len(results) - passed} failed")
    return EX_OK if passed == len(results) else EX_CROSSCHECK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.selftest:
        if args.command is not None:
            parser.error("--selftest takes no subcommand")
        return run_selftest()
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EX_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EX_USAGE
    except InternalConsistencyError as exc:
        print(f"internal cross-check failed: {exc}", file=sys.stderr)
        return EX_CROSSCHECK


if __name__ == "__main__":
    sys.exit(main())
