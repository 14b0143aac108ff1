"""Exact rationals, p-adic valuations and unit-group helpers.

Rationals are :class:`fractions.Fraction` values. ``Fraction`` already keeps
the canonical form (positive denominator, reduced, zero as ``0/1``) and its
``str`` is the ``num/den`` form used for serialization, so nothing here wraps it.
"""
from __future__ import annotations

import functools
from fractions import Fraction
from math import gcd
from typing import Union

Rational = Fraction
RationalLike = Union[int, Fraction, str]

# Deterministic Miller-Rabin: these witnesses decide every n < 3.317e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_LIMIT = 3317044064679887385961981


class NotPrimeError(ValueError):
    """Raised when an argument that must be prime is not."""


@functools.total_ordering
class _Infinity:
    """Valuation of zero. Compares above every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("INFINITY")

    def __repr__(self):
        return "INFINITY"

    __str__ = __repr__


INFINITY = _Infinity()
Valuation = Union[int, _Infinity]


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ``int``, ``Fraction`` or a ``"num/den"`` string to a Fraction.

    >>> as_rational("-6/4")
    Fraction(-3, 2)
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def format_rational(r: Fraction) -> str:
    """Exact string form: ``"num/den"``, or just ``"num"`` for integers."""
    return str(Fraction(r))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    if n >= _MR_LIMIT:
        raise ValueError(f"{n} exceeds the deterministic Miller-Rabin range")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or isinstance(p, bool):
        raise TypeError(f"prime must be an int, got {type(p).__name__}")
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    return p


def int_valuation(n: int, p: int) -> tuple[int, int]:
    """Return ``(v, u)`` with ``n = p**v * u`` and ``p`` not dividing ``u``.

    ``n`` must be nonzero.
    """
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def vp(r: RationalLike, p: int) -> Valuation:
    """p-adic valuation of a rational; ``INFINITY`` for zero."""
    check_prime(p)
    r = as_rational(r)
    if r == 0:
        return INFINITY
    return int_valuation(r.numerator, p)[0] - int_valuation(r.denominator, p)[0]


def is_p_integral(r: RationalLike, p: int) -> bool:
    """True iff ``r`` lies in the p-local integers Z_(p)."""
    return vp(r, p) >= 0


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization of a positive integer."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    factors: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def euler_phi(m: int) -> int:
    result = m
    for p in factorize(m):
        result = result // p * (p - 1)
    return result


def multiplicative_order(a: int, m: int) -> int:
    """Order of ``a`` in (Z/m)^x.

    Starts from phi(m) and strips prime factors while the power stays 1.

    >>> multiplicative_order(2, 25)
    20
    """
    if m < 2:
        raise ValueError("modulus must be at least 2")
    if gcd(a, m) != 1:
        raise ValueError(f"{a} is not a unit modulo {m}")
    t = euler_phi(m)
    for p, e in factorize(t).items():
        for _ in range(e):
            if pow(a, t // p, m) == 1:
                t //= p
            else:
                break
    return t
