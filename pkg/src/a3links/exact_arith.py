"""Exact slope arithmetic on the extended rationals.

Slopes are reduced fractions p/q with q >= 0; infinity is the single value
1/0.  The "ominus" difference deliberately keeps its raw numerator and
denominator because the bullet pairing is sensitive to the common sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence, Union

from .errors import (
    EqualSlopes,
    NegativeDenominatorInput,
    NonUnimodularMatrix,
    SlopeOutOfRange,
    ZeroInput,
    ZeroSlopePair,
)

__all__ = [
    "Slope",
    "RawFraction",
    "ContFrac",
    "INF",
    "reduce",
    "slope",
    "is_farey_neighbor",
    "ominus",
    "bullet",
    "mobius_apply",
    "neg_cont_frac",
    "ceil_term",
]


@dataclass(frozen=True, order=False)
class Slope:
    """A canonical extended rational.  Build through ``reduce`` or ``slope``."""

    num: int
    den: int

    def __post_init__(self) -> None:
        if self.num == 0 and self.den == 0:
            raise ZeroSlopePair("0/0 is not a slope")
        if self.den < 0:
            raise ValueError(f"non-canonical slope {self.num}/{self.den}: negative denominator")
        if self.den == 0 and self.num != 1:
            raise ValueError("infinity must be written 1/0")
        if gcd(self.num, self.den) != 1:
            raise ValueError(f"non-canonical slope {self.num}/{self.den}: not reduced")

    @property
    def is_infinite(self) -> bool:
        return self.den == 0

    def to_fraction(self) -> Fraction:
        if self.den == 0:
            raise SlopeOutOfRange("infinity has no rational value")
        return Fraction(self.num, self.den)

    def __str__(self) -> str:
        return "inf" if self.den == 0 else f"{self.num}/{self.den}"

    def __repr__(self) -> str:
        return f"Slope({self})"

    @classmethod
    def parse(cls, text: str) -> "Slope":
        """Parse ``"p/q"``, an integer, or ``"inf"``."""
        t = text.strip().replace("−", "-")
        if t.lower() in ("inf", "infinity", "∞", "1/0", "-1/0"):
            return INF
        if "/" in t:
            p, q = t.split("/", 1)
            return reduce(int(p), int(q))
        return reduce(int(t), 1)


INF = Slope(1, 0)


@dataclass(frozen=True)
class RawFraction:
    """An unreduced pair num/den; no normalization is ever applied."""

    num: int
    den: int

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"

    @classmethod
    def of(cls, x: "SlopeLike") -> "RawFraction":
        if isinstance(x, RawFraction):
            return x
        return cls(x.num, x.den)


SlopeLike = Union[Slope, RawFraction]


@dataclass(frozen=True)
class ContFrac:
    """Negative continued fraction [a0, a1, ...] = a0 - 1/(a1 - 1/(...))."""

    entries: tuple

    def evaluate(self) -> Fraction:
        if not self.entries:
            raise ValueError("empty continued fraction")
        value = Fraction(self.entries[-1])
        for a in reversed(self.entries[:-1]):
            value = a - 1 / value
        return value

    def __str__(self) -> str:
        return "[" + ", ".join(str(a) for a in self.entries) + "]"


def reduce(num: int, den: int) -> Slope:
    if num == 0 and den == 0:
        raise ZeroSlopePair("(0, 0) does not define a slope")
    if den == 0:
        return INF
    g = gcd(num, den)
    if den < 0:
        g = -g
    return Slope(num // g, den // g)


def slope(x: Union[int, Fraction, str, Slope]) -> Slope:
    """Coerce an int, Fraction or string into a Slope."""
    if isinstance(x, Slope):
        return x
    if isinstance(x, str):
        return Slope.parse(x)
    if isinstance(x, int):
        return Slope(x, 1)
    if isinstance(x, Fraction):
        return Slope(x.numerator, x.denominator)
    raise TypeError(f"cannot interpret {x!r} as a slope")


def is_farey_neighbor(a: Slope, b: Slope) -> bool:
    if a == b:
        raise EqualSlopes(f"{a} compared with itself")
    return abs(a.num * b.den - a.den * b.num) == 1


def ominus(a: SlopeLike, b: SlopeLike) -> RawFraction:
    """Componentwise difference (a.num - b.num)/(a.den - b.den), unreduced."""
    for x in (a, b):
        if x.den < 0:
            raise NegativeDenominatorInput(f"{x.num}/{x.den} has a negative denominator")
    return RawFraction(a.num - b.num, a.den - b.den)


def bullet(a: SlopeLike, b: SlopeLike) -> int:
    return a.num * b.den - a.den * b.num


def _det(m: Sequence[Sequence[int]]) -> int:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def mobius_apply(m: Sequence[Sequence[int]], s: Slope) -> Slope:
    """Act on the column vector (num, den) by an integer matrix of determinant +-1."""
    if len(m) != 2 or any(len(row) != 2 for row in m):
        raise NonUnimodularMatrix("expected a 2x2 matrix")
    if abs(_det(m)) != 1:
        raise NonUnimodularMatrix(f"determinant {_det(m)} is not +-1")
    p = m[0][0] * s.num + m[0][1] * s.den
    q = m[1][0] * s.num + m[1][1] * s.den
    return reduce(p, q)


def neg_cont_frac(s: Slope) -> ContFrac:
    """Expand s <= -1 as [a0, a1, ...] with a_i = floor at each step.

    Every entry is <= -2 except for s = -1 itself, whose only expansion is
    [-1]: a finite fraction with all entries <= -2 is strictly below -1.
    """
    if s.is_infinite:
        raise SlopeOutOfRange("infinity has no continued fraction")
    x = s.to_fraction()
    if x > -1:
        raise SlopeOutOfRange(f"{s} is greater than -1")
    entries = []
    while True:
        a = x.numerator // x.denominator
        entries.append(a)
        rest = x - a
        if rest == 0:
            break
        x = -1 / rest
    return ContFrac(tuple(entries))


def ceil_term(t: int) -> int:
    """The ceiling of -1/t."""
    if t == 0:
        raise ZeroInput("ceil(-1/t) is undefined at t = 0")
    return _ceil_div(-1, t)


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)
