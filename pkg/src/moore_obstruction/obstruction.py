"""Integrality obstruction to A_n-structures on mod p^k Moore spectra.

A fixed class beta^-1 f(e) restricting to c on CP^1 is f = c*ln(1+e), which
is p-integral through e^n exactly when n < p^(v_p(c)+1). With
c = (p-1)p^(k-1) this gives the sharp bound n < p^k for odd p.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

from .exact_arith import (
    RationalLike,
    as_rational,
    check_prime,
    format_rational,
    int_valuation,
    is_prime,
    multiplicative_order,
    vp,
)
from .ktheory import solve_fixed_series
from .series import TruncSeries, log_series

# The generator used at p = 2 in place of a search.
P2_GENERATOR = 3


class InternalConsistencyError(RuntimeError):
    """Two routes to the same quantity disagreed. Always a program error."""


@dataclass(frozen=True)
class ObstructionReport:
    p: int
    k: int
    c: Fraction
    first_failure: int
    n_max: int
    valuations: tuple[tuple[int, int], ...] = field(repr=False)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "c": format_rational(self.c),
            "first_failure": self.first_failure,
            "n_max": self.n_max,
            "valuations": [[i, v] for i, v in self.valuations],
        }

    def csv_row(self) -> str:
        return f"{self.p},{self.k},{format_rational(self.c)},{self.first_failure},{self.n_max}"


@dataclass(frozen=True)
class DegreeDecomposition:
    """``base**exponent - 1 == p**k * lambda`` with ``lambda`` prime to p."""

    p: int
    base: int
    exponent: int
    k: int
    lambda_residue: int


def _check_odd_prime(p: int) -> int:
    check_prime(p)
    if p == 2:
        raise ValueError("p must be an odd prime")
    return p


def find_generator(p: int) -> int:
    """Smallest prime q != p generating (Z/p^2)^x, hence topologically Z_p^x."""
    _check_odd_prime(p)
    modulus = p * p
    target = p * (p - 1)
    q = 2
    while True:
        if q != p and is_prime(q) and multiplicative_order(q, modulus) == target:
            return q
        q += 1


def degree_decompose(p: int, q: int, e: int) -> DegreeDecomposition:
    check_prime(p)
    if q < 2:
        raise ValueError("q must be at least 2")
    if e < 1:
        raise ValueError("exponent must be at least 1")
    if q % p == 0:
        raise ValueError(f"{q} is not prime to {p}")
    k, lam = int_valuation(q**e - 1, p)
    return DegreeDecomposition(p, q, e, k, lam % p)


def scan_first_failure(p: int, c: Fraction, limit: Optional[int] = None) -> int:
    """Smallest i >= 1 with v_p(c/i) < 0, found by trying i = 1, 2, ..."""
    i = 1
    while limit is None or i <= limit:
        if vp(c / i, p) < 0:
            return i
        i += 1
    raise InternalConsistencyError(f"no integrality failure up to i = {limit}")


def first_failure_index(p: int, c: RationalLike) -> int:
    """First e^i at which c*ln(1+e) stops being p-integral.

    The closed form ``p**(v_p(c)+1)`` is cross-checked by a direct scan.
    """
    check_prime(p)
    c = as_rational(c)
    if c == 0:
        raise ValueError("c must be nonzero")
    v = vp(c, p)
    if v < 0:
        raise ValueError(f"c = {c} is not {p}-integral")
    closed = p ** (v + 1)
    scanned = scan_first_failure(p, c, closed)
    if scanned != closed:
        raise InternalConsistencyError(
            f"scan found {scanned}, closed form gives {closed}"
        )
    return closed


def report_from_series(p: int, k: int, f: TruncSeries) -> ObstructionReport:
    """Scan the coefficients of a fixed series for the first non-p-integral one.

    ``c`` is read off as the e^1 coefficient. The series must be long enough
    to contain a failure.
    """
    valuations = []
    failure = None
    for i in range(1, f.modulus):
        v = vp(f[i], p)
        valuations.append((i, v))
        if v < 0:
            failure = i
            break
    if failure is None:
        raise InternalConsistencyError(
            f"series mod x^{f.modulus} is {p}-integral throughout"
        )
    return ObstructionReport(
        p=p,
        k=k,
        c=f[1],
        first_failure=failure,
        n_max=failure - 1,
        valuations=tuple(valuations),
    )


def obstruction_report(p: int, k: int, c: RationalLike) -> ObstructionReport:
    """Report for the fixed class with restriction degree ``c``.

    ``n_max`` comes from scanning the coefficients of c*ln(1+e) and is then
    checked against :func:`first_failure_index`.
    """
    c = as_rational(c)
    expected = first_failure_index(p, c)
    report = report_from_series(p, k, log_series(expected + 1).scale(c))
    if report.first_failure != expected:
        raise InternalConsistencyError(
            f"log scan failed at {report.first_failure}, expected {expected}"
        )
    return report


def an_bound(p: int, k: int) -> ObstructionReport:
    """Largest n for which M_p(k) carries an A_n-structure from a spherical fibration."""
    _check_odd_prime(p)
    if k < 1:
        raise ValueError("k must be at least 1")
    report = obstruction_report(p, k, (p - 1) * p ** (k - 1))
    if report.n_max != p**k - 1:
        raise InternalConsistencyError(
            f"n_max = {report.n_max} but p^k - 1 = {p**k - 1}"
        )
    return report


def an_bound_p2(k: int, lam: int = 1) -> tuple[ObstructionReport, ObstructionReport]:
    """Lower and upper reports for M_2(k+1).

    Lower: c = 2^(k-1), so an A_(2^k - 1)-structure exists. Upper: the K(1)-local
    comparison map sends the degree to 2^k * lam with lam odd, and integrality
    fails at e^(2^(k+1)), ruling out A_(2^(k+1)). ``lam`` does not affect the
    failure index; it defaults to 1.
    """
    if k <= 1:
        raise ValueError("p = 2 requires k > 1")
    if lam % 2 == 0:
        raise ValueError("lam must be odd")
    lower = obstruction_report(2, k, 2 ** (k - 1))
    upper = obstruction_report(2, k, 2**k * lam)
    if lower.n_max != 2**k - 1 or upper.first_failure != 2 ** (k + 1):
        raise InternalConsistencyError(f"p = 2 bounds off at k = {k}")
    return lower, upper


def generator_for(p: int) -> int:
    return P2_GENERATOR if p == 2 else find_generator(p)


class Verification(NamedTuple):
    agreed: bool
    report: ObstructionReport
    # only set at p = 2, where ``report`` is the lower bound
    upper: Optional[ObstructionReport] = None


def _two_routes(p: int, k: int, c: Fraction, q: int, m: int) -> tuple[bool, ObstructionReport]:
    oracle = log_series(m).scale(c)
    solved = solve_fixed_series(q, m, c)
    by_log = report_from_series(p, k, oracle)
    by_solver = report_from_series(p, k, solved)
    return oracle == solved and by_log == by_solver, by_log


def verify_theorem(p: int, k: int) -> Verification:
    """Recompute the bound via the log series and via the functional-equation solver.

    ``agreed`` is true when both series coincide, both scans give the same
    report, and the report matches the theorem.
    """
    check_prime(p)
    q = generator_for(p)
    if p == 2:
        lower, upper = an_bound_p2(k)
        ok_lo, lo = _two_routes(2, k, lower.c, q, 2**k + 1)
        ok_hi, hi = _two_routes(2, k, upper.c, q, 2 ** (k + 1) + 1)
        agreed = (
            ok_lo and ok_hi
            and lo == lower and hi == upper
            and lo.n_max == 2**k - 1 and hi.first_failure == 2 ** (k + 1)
        )
        return Verification(agreed, lo, hi)
    report = an_bound(p, k)
    ok, scanned = _two_routes(p, k, report.c, q, p**k + 1)
    agreed = ok and scanned == report and scanned.n_max == p**k - 1
    return Verification(agreed, scanned)
