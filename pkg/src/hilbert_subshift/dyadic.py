"""Exact dyadic rationals and closed dyadic subintervals of [0, 1]."""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from numbers import Rational


@total_ordering
class DyadicRational:
    """The number ``numerator / 2**exponent`` in canonical form.

    Canonical means the numerator is odd or the exponent is zero, so equal
    values have equal representations.
    """

    __slots__ = ("numerator", "exponent")

    def __init__(self, numerator: int, exponent: int = 0):
        if exponent < 0:
            numerator <<= -exponent
            exponent = 0
        if numerator == 0:
            exponent = 0
        elif exponent and not numerator & 1:
            shift = min((numerator & -numerator).bit_length() - 1, exponent)
            numerator >>= shift
            exponent -= shift
        self.numerator = numerator
        self.exponent = exponent

    @classmethod
    def from_fraction(cls, value: Fraction | int) -> DyadicRational:
        value = Fraction(value)
        den = value.denominator
        if den & (den - 1):
            raise ValueError(f"{value} is not a dyadic rational")
        return cls(value.numerator, den.bit_length() - 1)

    @classmethod
    def parse(cls, text: str) -> DyadicRational:
        """Parse ``p/2^e``, ``p/q`` (q a power of two) or an integer."""
        text = text.strip()
        if "/2^" in text:
            p, e = text.split("/2^")
            return cls(int(p), int(e))
        return cls.from_fraction(Fraction(text))

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __repr__(self) -> str:
        return f"DyadicRational({self.numerator}, {self.exponent})"

    def __str__(self) -> str:
        if self.exponent == 0:
            return str(self.numerator)
        return f"{self.numerator}/2^{self.exponent}"

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    def _align(self, other: DyadicRational) -> tuple[int, int, int]:
        e = max(self.exponent, other.exponent)
        return self.numerator << (e - self.exponent), other.numerator << (e - other.exponent), e

    def __eq__(self, other: object) -> bool:
        if isinstance(other, DyadicRational):
            return self.numerator == other.numerator and self.exponent == other.exponent
        if isinstance(other, Rational):
            return self.numerator * other.denominator == other.numerator << self.exponent
        return NotImplemented

    def __lt__(self, other: object) -> bool:
        if isinstance(other, DyadicRational):
            a, b, _ = self._align(other)
            return a < b
        if isinstance(other, Rational):
            return self.numerator * other.denominator < other.numerator << self.exponent
        return NotImplemented

    def __add__(self, other: DyadicRational) -> DyadicRational:
        a, b, e = self._align(other)
        return DyadicRational(a + b, e)

    def __sub__(self, other: DyadicRational) -> DyadicRational:
        a, b, e = self._align(other)
        return DyadicRational(a - b, e)

    def __neg__(self) -> DyadicRational:
        return DyadicRational(-self.numerator, self.exponent)

    def scale_pow2(self, shift: int) -> DyadicRational:
        """Multiply by ``2**shift`` (shift may be negative)."""
        return DyadicRational(self.numerator, self.exponent - shift)


ZERO = DyadicRational(0)
ONE = DyadicRational(1)


class DyadicInterval:
    """A closed interval ``[lo, hi]`` inside [0, 1] with dyadic endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: DyadicRational, hi: DyadicRational):
        if not (ZERO <= lo <= hi <= ONE):
            raise ValueError(f"[{lo}, {hi}] is not a closed subinterval of [0, 1]")
        self.lo = lo
        self.hi = hi

    @classmethod
    def unit(cls) -> DyadicInterval:
        return cls(ZERO, ONE)

    @property
    def length(self) -> DyadicRational:
        return self.hi - self.lo

    def length_exponent(self) -> int:
        """Return ``e`` with ``|I| = 2**-e``; raises if the length is not of that form."""
        length = self.length
        if length.numerator != 1:
            raise ValueError(f"length {length} is not a power of 1/2")
        return length.exponent

    def contains(self, x: Rational | DyadicRational) -> bool:
        return self.lo <= x and not self.hi < x

    __contains__ = contains

    def subdivide(self, parts: int, index: int) -> DyadicInterval:
        return subdivide(self, parts, index)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DyadicInterval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    def __repr__(self) -> str:
        return f"DyadicInterval({self.lo}, {self.hi})"

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def subdivide(interval: DyadicInterval, parts: int, index: int) -> DyadicInterval:
    """Return the ``index``-th (1-based, ascending) of ``parts`` equal closed pieces.

    ``parts`` must be a power of two so the pieces stay dyadic.
    """
    if parts < 1 or parts & (parts - 1):
        raise ValueError(f"parts must be a power of two, got {parts}")
    if not 1 <= index <= parts:
        raise IndexError(f"piece index {index} outside 1..{parts}")
    shift = parts.bit_length() - 1
    step = interval.length.scale_pow2(-shift)
    lo = interval.lo + DyadicRational(step.numerator * (index - 1), step.exponent)
    if index == parts:
        return DyadicInterval(lo, interval.hi)
    return DyadicInterval(lo, lo + step)


def contains(interval: DyadicInterval, x: Rational | DyadicRational) -> bool:
    """Closed-interval membership; shared endpoints belong to both neighbours."""
    return interval.contains(x)


def piece_containing(interval: DyadicInterval, parts: int, x: Rational) -> int:
    """Smallest 1-based piece index whose closed piece contains ``x``."""
    if not interval.contains(x):
        raise ValueError(f"{x} not in {interval}")
    length = interval.length
    if length.numerator == 0:
        return 1
    # position of x inside the interval measured in piece widths
    offset = (Fraction(x) - interval.lo.to_fraction()) * parts / length.to_fraction()
    q, rem = divmod(offset.numerator, offset.denominator)
    if rem == 0 and q > 0:
        # on a shared boundary: the lower piece wins
        return q
    return min(q + 1, parts)
