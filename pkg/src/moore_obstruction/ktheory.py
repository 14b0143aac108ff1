"""Adams operations on ku^2(CP^n) tensor Q and their fixed classes.

We model ku^*(CP^n) as Q[[e]]/(e^{n+1})[beta^{+-1}] with
psi_q(beta) = q*beta and psi_q(e) = (1+e)^q - 1. A degree-2 class is
beta^{-1} f(e), so psi_q acts on f by f -> q^{-1} f((1+e)^q - 1).
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .exact_arith import RationalLike, as_rational, format_rational
from .series import TruncSeries, adams_argument, binomial_row


@dataclass(frozen=True)
class KClass:
    """``beta**bott_power * f(e)``; degree-2 classes have ``bott_power == -1``.

    Only ``bott_power == -1`` is exercised by the obstruction computation;
    other powers get the ``q**bott_power`` scaling and nothing more.
    """

    bott_power: int
    series: TruncSeries

    def __post_init__(self):
        if self.series[0] != 0:
            raise ValueError("K-class series must have zero constant term")

    @property
    def modulus(self) -> int:
        return self.series.modulus


def adams_apply(y: KClass, q: int) -> KClass:
    if q < 1:
        raise ValueError("q must be at least 1")
    m = y.modulus
    image = y.series.compose(adams_argument(q, m))
    return KClass(y.bott_power, image.scale(Fraction(q) ** y.bott_power))


@functools.lru_cache(maxsize=64)
def _argument_powers(q: int, m: int) -> tuple[tuple[int, ...], ...]:
    """Integer coefficient vectors of ((1+x)^q - 1)^j mod x^m, j = 0..m-1."""
    g = binomial_row(q, min(q, m - 1))
    g_support = [(i, c) for i, c in enumerate(g) if i > 0 and c]
    powers = [(1,) + (0,) * (m - 1)]
    for _ in range(1, m):
        prev = powers[-1]
        nxt = [0] * m
        for i, a in enumerate(prev):
            if not a:
                continue
            for s, c in g_support:
                if i + s >= m:
                    break
                nxt[i + s] += a * c
        powers.append(tuple(nxt))
    return tuple(powers)


def solve_fixed_series(q: int, m: int, a1: RationalLike) -> TruncSeries:
    """The unique f with f((1+x)^q - 1) = q f(x) mod x^m and f'(0) = a1.

    Coefficients are fixed one at a time. With a_1..a_{k-1} known, the x^k
    coefficient of the residual is ``d + (q^k - q) a_k``, where ``d`` comes
    from the known prefix only, so ``a_k = -d / (q^k - q)``.
    """
    if q <= 1:
        raise ValueError("q must be greater than 1 (q^k - q would vanish)")
    if m < 2:
        raise ValueError("modulus must be at least 2")
    a1 = as_rational(a1)
    powers = _argument_powers(q, m)
    a = [Fraction(0)] * m
    a[1] = a1
    for k in range(2, m):
        # x^k coefficient of prefix(g) - q*prefix; a_k is still 0 here.
        d = sum((a[j] * powers[j][k] for j in range(1, k)), Fraction(0))
        a[k] = -d / (q**k - q)
    return TruncSeries(a, m)


def residual(f: TruncSeries, q: int) -> TruncSeries:
    """f((1+x)^q - 1) - q f(x); zero exactly when f solves the equation."""
    return f.compose(adams_argument(q, f.modulus)) - f.scale(q)


@dataclass(frozen=True)
class PsiMatrix:
    """Matrix of psi_q on span{beta^-1 e^1, ..., beta^-1 e^n}.

    ``entries[i-1][j-1]`` is the e^i coefficient of psi_q(beta^-1 e^j).
    """

    q: int
    n: int
    entries: tuple[tuple[Fraction, ...], ...]

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "entries": [[format_rational(x) for x in row] for row in self.entries],
        }


def psi_matrix(q: int, n: int) -> PsiMatrix:
    if q < 2:
        raise ValueError("q must be at least 2")
    if n < 1:
        raise ValueError("n must be at least 1")
    g = adams_argument(q, n + 1)
    inv_q = Fraction(1, q)
    cols = []
    power = g
    for j in range(1, n + 1):
        if j > 1:
            power = power * g
        cols.append([inv_q * power[i] for i in range(1, n + 1)])
    entries = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
    return PsiMatrix(q, n, entries)


def _bareiss_echelon(rows: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form of an integer matrix (in place).

    Returns the matrix and its pivot columns. Every division is exact by
    Sylvester's identity; a nonzero remainder means a bug, so it is asserted.
    """
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    prev = 1
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        pivot = next((i for i in range(r, nrows) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pr = rows[r]
        for i in range(r + 1, nrows):
            ri = rows[i]
            lead = ri[c]
            for j in range(c + 1, ncols):
                q, rem = divmod(pr[c] * ri[j] - lead * pr[j], prev)
                assert rem == 0, "Bareiss division was not exact"
                ri[j] = q
            ri[c] = 0
        prev = pr[c]
        pivots.append(c)
        r += 1
    return rows, pivots


def kernel_basis(matrix) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel of a rational matrix.

    Each vector is scaled so its first nonzero coordinate is 1, ordered by
    the position of that coordinate.
    """
    rows = [[as_rational(x) for x in row] for row in matrix]
    if not rows:
        return []
    ncols = len(rows[0])
    int_rows = []
    for row in rows:
        den = lcm(*(x.denominator for x in row))
        int_rows.append([int(x * den) for x in row])
    echelon, pivots = _bareiss_echelon(int_rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for r in reversed(range(len(pivots))):
            pc = pivots[r]
            row = echelon[r]
            s = sum((row[j] * v[j] for j in range(pc + 1, ncols) if row[j]), Fraction(0))
            v[pc] = -s / row[pc]
        lead = next(x for x in v if x != 0)
        basis.append(tuple(x / lead for x in v))
    basis.sort(key=lambda v: next(i for i, x in enumerate(v) if x != 0))
    return basis


def fixed_subspace(q: int, n: int) -> list[tuple[Fraction, ...]]:
    """Basis of the classes beta^-1 f(e) in ku^2(CP^n) tensor Q fixed by psi_q."""
    entries = psi_matrix(q, n).entries
    shifted = [
        [x - (1 if i == j else 0) for j, x in enumerate(row)]
        for i, row in enumerate(entries)
    ]
    return kernel_basis(shifted)
