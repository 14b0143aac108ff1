"""Truncated formal power series over Q, i.e. the ring Q[[x]]/(x^m)."""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .exact_arith import RationalLike, as_rational, format_rational


class ModulusMismatch(ValueError):
    pass


def _int_convolve(a: Sequence[int], b: Sequence[int], m: int) -> list[int]:
    out = [0] * m
    b_support = [(j, c) for j, c in enumerate(b) if c]
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in b_support:
            if i + j >= m:
                break
            out[i + j] += ai * bj
    return out


def _clear_denominators(coeffs: Sequence[Fraction]) -> tuple[list[int], int]:
    den = lcm(*(c.denominator for c in coeffs)) if coeffs else 1
    return [c.numerator * (den // c.denominator) for c in coeffs], den


class TruncSeries:
    """An element of Q[[x]]/(x^m), stored densely.

    ``coeffs[i]`` is the coefficient of ``x**i``. Instances are immutable.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike], modulus: int | None = None):
        cs = tuple(as_rational(c) for c in coeffs)
        if modulus is None:
            modulus = len(cs)
        if modulus < 1:
            raise ValueError("modulus must be at least 1")
        if len(cs) > modulus:
            # anything at or above x^m is zero in the quotient ring
            cs = cs[:modulus]
        cs += (Fraction(0),) * (modulus - len(cs))
        self._coeffs = cs

    @classmethod
    def zero(cls, m: int) -> TruncSeries:
        return cls((), m)

    @classmethod
    def x(cls, m: int) -> TruncSeries:
        return cls((0, 1), m)

    @property
    def modulus(self) -> int:
        return len(self._coeffs)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    def __getitem__(self, i: int) -> Fraction:
        return self._coeffs[i]

    def __len__(self) -> int:
        return len(self._coeffs)

    def __iter__(self):
        return iter(self._coeffs)

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(self._coeffs)

    def is_zero(self) -> bool:
        return not any(self._coeffs)

    def _check(self, other: TruncSeries) -> None:
        if not isinstance(other, TruncSeries):
            raise TypeError(f"expected TruncSeries, got {type(other).__name__}")
        if other.modulus != self.modulus:
            raise ModulusMismatch(
                f"moduli differ: x^{self.modulus} vs x^{other.modulus}"
            )

    def __add__(self, other: TruncSeries) -> TruncSeries:
        self._check(other)
        return TruncSeries((a + b for a, b in zip(self, other)), self.modulus)

    def __sub__(self, other: TruncSeries) -> TruncSeries:
        self._check(other)
        return TruncSeries((a - b for a, b in zip(self, other)), self.modulus)

    def __neg__(self) -> TruncSeries:
        return TruncSeries((-a for a in self), self.modulus)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        self._check(other)
        m = self.modulus
        a, da = _clear_denominators(self._coeffs)
        b, db = _clear_denominators(other._coeffs)
        den = da * db
        return TruncSeries((Fraction(c, den) for c in _int_convolve(a, b, m)), m)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def scale(self, c: RationalLike) -> TruncSeries:
        c = as_rational(c)
        return TruncSeries((c * a for a in self), self.modulus)

    def compose(self, g: TruncSeries) -> TruncSeries:
        """``self(g(x))`` mod x^m by Horner's rule; ``g(0)`` must be 0."""
        self._check(g)
        if g[0] != 0:
            raise ValueError("inner series must have zero constant term")
        m = self.modulus
        acc = TruncSeries((self._coeffs[-1],), m)
        for c in reversed(self._coeffs[:-1]):
            acc = acc * g
            acc = TruncSeries((c + acc[0],) + acc.coeffs[1:], m)
        return acc

    def __call__(self, g: TruncSeries) -> TruncSeries:
        return self.compose(g)

    def to_json(self) -> dict:
        return {"modulus": self.modulus, "coeffs": [format_rational(c) for c in self]}

    @classmethod
    def from_json(cls, data: dict) -> TruncSeries:
        return cls(data["coeffs"], int(data["modulus"]))

    def format_terms(self) -> str:
        """The polynomial part only, e.g. ``x - 1/2*x^2``."""
        parts: list[str] = []
        for i, c in enumerate(self._coeffs):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if i == 0:
                body = format_rational(mag)
            else:
                mono = "x" if i == 1 else f"x^{i}"
                body = mono if mag == 1 else f"{format_rational(mag)}*{mono}"
            parts.append((sign, body))
        if not parts:
            return "0"
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self) -> str:
        return f"{self.format_terms()} mod x^{self.modulus}"

    def __repr__(self) -> str:
        return f"TruncSeries({self.format_terms()!r}, modulus={self.modulus})"


def add(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    return f + g


def mul(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    return f * g


def compose(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    return f.compose(g)


def scale(c: RationalLike, f: TruncSeries) -> TruncSeries:
    return f.scale(c)


def binomial_row(n: int, upto: int) -> list[int]:
    """``C(n, 0..upto)`` by the multiplicative recurrence."""
    row = [1]
    for i in range(1, upto + 1):
        row.append(row[-1] * (n - i + 1) // i)
    return row


def log_series(m: int) -> TruncSeries:
    """ln(1+x) = x - x^2/2 + x^3/3 - ... mod x^m."""
    if m < 1:
        raise ValueError("modulus must be at least 1")
    return TruncSeries(
        [0] + [Fraction((-1) ** (i + 1), i) for i in range(1, m)], m
    )


def adams_argument(q: int, m: int) -> TruncSeries:
    """(1+x)^q - 1 mod x^m: the image of e = gamma - 1 under psi_q."""
    if q < 1:
        raise ValueError("q must be at least 1")
    if m < 1:
        raise ValueError("modulus must be at least 1")
    top = min(q, m - 1)
    row = binomial_row(q, top)
    return TruncSeries([0] + row[1:], m)
