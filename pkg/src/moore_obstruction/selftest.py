"""Small invariant suite behind ``moore-obstruction --selftest``."""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterator

from .exact_arith import multiplicative_order, vp
from .ktheory import fixed_subspace, residual, solve_fixed_series
from .obstruction import an_bound, an_bound_p2, find_generator
from .series import log_series


def _lemma_oracle() -> bool:
    for q in (2, 3, 5, 7):
        for m in range(2, 21):
            for c in (Fraction(1), Fraction(-3), Fraction(7, 2)):
                f = solve_fixed_series(q, m, c)
                if f != log_series(m).scale(c) or not residual(f, q).is_zero():
                    return False
    return True


def _kernel_dims() -> bool:
    for q in (2, 3, 5):
        for n in range(1, 16):
            basis = fixed_subspace(q, n)
            if len(basis) != 1 or basis[0] != log_series(n + 1).coeffs[1:]:
                return False
    return True


def _lte_odd() -> bool:
    for p in (3, 5, 7, 11):
        q = find_generator(p)
        if multiplicative_order(q, p * p) != p * (p - 1):
            return False
        for k in range(1, 6):
            if vp(q ** ((p - 1) * p ** (k - 1)) - 1, p) != k:
                return False
    return True


def _lte_two() -> bool:
    return all(vp(3 ** (2 ** (k - 1)) - 1, 2) == k + 1 for k in range(2, 11))


def _bounds() -> bool:
    odd = all(
        an_bound(p, k).n_max == p**k - 1 for p in (3, 5, 7) for k in (1, 2, 3)
    )
    two = all(
        lo.n_max == 2**k - 1 and hi.first_failure == 2 ** (k + 1)
        for k in range(2, 7)
        for lo, hi in [an_bound_p2(k)]
    )
    return odd and two


CHECKS: list[tuple[str, Callable[[], bool]]] = [
    ("solver equals c*ln(1+x)", _lemma_oracle),
    ("psi_q fixed line is the log line", _kernel_dims),
    ("v_p(q^((p-1)p^(k-1)) - 1) = k", _lte_odd),
    ("v_2(3^(2^(k-1)) - 1) = k + 1", _lte_two),
    ("A_n bounds", _bounds),
]


def run() -> Iterator[tuple[str, bool]]:
    for name, check in CHECKS:
        try:
            ok = check()
        except Exception:  # a crash counts as a failed check
            ok = False
        yield name, ok
