"""Exact dyadic-rational arithmetic and combinatorial dyadic-grid addresses.

Numbers of the form p/2^e are kept in a dedicated type so that quantities
which are provably dyadic (interval measures, selection averages) can never
silently acquire an odd denominator.  General rationals (the Carleson bound
C may be something like 16/5) are plain ``fractions.Fraction``; the two mix
only through exact cross-multiplication comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Tuple, Union

Rational = Fraction

RationalLike = Union["DyadicRational", Fraction, int]


def to_fraction(x: RationalLike) -> Fraction:
    """Coerce an int, Fraction, or DyadicRational to an exact Fraction."""
    if isinstance(x, DyadicRational):
        return x.as_fraction()
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", an integer, or a finite decimal literal, exactly."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse rational from {text!r}: {exc}") from None


def compare(x: RationalLike, y: RationalLike) -> int:
    """Exact three-way comparison: -1, 0, or +1."""
    a, b = to_fraction(x), to_fraction(y)
    if a < b:
        return -1
    return 0 if a == b else 1


def ceil_rational(x: RationalLike) -> int:
    f = to_fraction(x)
    return -((-f.numerator) // f.denominator)


def floor_rational(x: RationalLike) -> int:
    f = to_fraction(x)
    return f.numerator // f.denominator


class DyadicRational:
    """Exact number numerator / 2^log2_denominator, eagerly canonicalized.

    Canonical form: the numerator is odd or zero, or the exponent is 0, so
    equality is structural.  Closed under +, -, *, negation, halving and
    doubling; never constructible from a non-dyadic rational.
    """

    __slots__ = ("numerator", "log2_denominator")

    def __init__(self, numerator: int, log2_denominator: int = 0) -> None:
        if log2_denominator < 0:
            raise ValueError("log2_denominator must be >= 0")
        n, e = numerator, log2_denominator
        if n == 0:
            e = 0
        else:
            while e > 0 and n % 2 == 0:
                n //= 2
                e -= 1
        object.__setattr__(self, "numerator", n)
        object.__setattr__(self, "log2_denominator", e)

    def __setattr__(self, name: str, value) -> None:
        raise AttributeError("DyadicRational is immutable")

    @classmethod
    def from_fraction(cls, f: RationalLike) -> "DyadicRational":
        """Exact conversion; rejects denominators that are not powers of two."""
        if isinstance(f, DyadicRational):
            return f
        f = Fraction(f)
        q = f.denominator
        if q & (q - 1):
            raise ValueError(f"{f} is not dyadic (denominator {q})")
        return cls(f.numerator, q.bit_length() - 1)

    @classmethod
    def parse(cls, text: str) -> "DyadicRational":
        return cls.from_fraction(parse_rational(text))

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.log2_denominator)

    def _align(self, other: "DyadicRational") -> Tuple[int, int, int]:
        e = max(self.log2_denominator, other.log2_denominator)
        a = self.numerator << (e - self.log2_denominator)
        b = other.numerator << (e - other.log2_denominator)
        return a, b, e

    def __add__(self, other: "DyadicRational") -> "DyadicRational":
        a, b, e = self._align(self._coerce(other))
        return DyadicRational(a + b, e)

    def __sub__(self, other: "DyadicRational") -> "DyadicRational":
        a, b, e = self._align(self._coerce(other))
        return DyadicRational(a - b, e)

    def __mul__(self, other: "DyadicRational") -> "DyadicRational":
        other = self._coerce(other)
        return DyadicRational(self.numerator * other.numerator,
                              self.log2_denominator + other.log2_denominator)

    def __neg__(self) -> "DyadicRational":
        return DyadicRational(-self.numerator, self.log2_denominator)

    def halve(self) -> "DyadicRational":
        return DyadicRational(self.numerator, self.log2_denominator + 1)

    def double(self) -> "DyadicRational":
        return DyadicRational(self.numerator * 2, self.log2_denominator)

    @staticmethod
    def _coerce(x: RationalLike) -> "DyadicRational":
        if isinstance(x, DyadicRational):
            return x
        if isinstance(x, int):
            return DyadicRational(x)
        if isinstance(x, Fraction):
            return DyadicRational.from_fraction(x)
        raise TypeError(f"cannot coerce {x!r} to DyadicRational")

    def __eq__(self, other: object) -> bool:
        if isinstance(other, DyadicRational):
            return (self.numerator == other.numerator
                    and self.log2_denominator == other.log2_denominator)
        if isinstance(other, (int, Fraction)):
            return self.as_fraction() == other
        return NotImplemented

    def __lt__(self, other: RationalLike) -> bool:
        return self.as_fraction() < to_fraction(other)

    def __le__(self, other: RationalLike) -> bool:
        return self.as_fraction() <= to_fraction(other)

    def __gt__(self, other: RationalLike) -> bool:
        return self.as_fraction() > to_fraction(other)

    def __ge__(self, other: RationalLike) -> bool:
        return self.as_fraction() >= to_fraction(other)

    def __hash__(self) -> int:
        # matches Fraction's numeric hash, so dyadics and fractions mix in sets
        return hash(self.as_fraction())

    def __bool__(self) -> bool:
        return self.numerator != 0

    def __floor__(self) -> int:
        return self.numerator >> self.log2_denominator

    def __ceil__(self) -> int:
        return -((-self.numerator) >> self.log2_denominator)

    def __str__(self) -> str:
        if self.log2_denominator == 0:
            return str(self.numerator)
        return f"{self.numerator}/{1 << self.log2_denominator}"

    def __repr__(self) -> str:
        return f"DyadicRational({self.numerator}, {self.log2_denominator})"


DYADIC_ZERO = DyadicRational(0)
DYADIC_ONE = DyadicRational(1)


def gr_compare(x: DyadicRational, c: RationalLike) -> int:
    """Exact three-way comparison of a dyadic against a general rational."""
    return compare(x, c)


@dataclass(frozen=True, order=True)
class NodeAddress:
    """A dyadic interval addressed combinatorially as (level, index).

    Level k splits the main interval into 2^k congruent pieces; the index
    counts them left to right.  Real endpoints are never materialized.
    """

    level: int
    index: int

    def __post_init__(self) -> None:
        if self.level < 0:
            raise ValueError("level must be >= 0")
        if not 0 <= self.index < (1 << self.level):
            raise ValueError(f"index {self.index} out of range at level {self.level}")

    def children(self) -> Tuple["NodeAddress", "NodeAddress"]:
        """Left and right halves, one level down."""
        return (NodeAddress(self.level + 1, 2 * self.index),
                NodeAddress(self.level + 1, 2 * self.index + 1))

    def parent(self) -> "NodeAddress":
        if self.level == 0:
            raise ValueError("the main interval has no parent")
        return NodeAddress(self.level - 1, self.index // 2)

    def is_ancestor_of(self, other: "NodeAddress") -> bool:
        """True iff this interval contains the other (non-strict)."""
        if self.level > other.level:
            return False
        return other.index >> (other.level - self.level) == self.index

    def relative_measure(self) -> DyadicRational:
        """|this interval| / |main interval| = 1/2^level."""
        return DyadicRational(1, self.level)

    def ancestors(self) -> Iterator["NodeAddress"]:
        """This address and every address above it, leaf to root."""
        a = self
        while True:
            yield a
            if a.level == 0:
                return
            a = a.parent()

    def leaf_span(self, depth: int) -> Tuple[int, int]:
        """Half-open index range [lo, hi) covered at the given deeper level."""
        if depth < self.level:
            raise ValueError("depth above this address's level")
        shift = depth - self.level
        return self.index << shift, (self.index + 1) << shift


ROOT = NodeAddress(0, 0)


def children(a: NodeAddress) -> Tuple[NodeAddress, NodeAddress]:
    return a.children()


def is_ancestor(a: NodeAddress, b: NodeAddress) -> bool:
    return a.is_ancestor_of(b)


def relative_measure(a: NodeAddress) -> DyadicRational:
    return a.relative_measure()
