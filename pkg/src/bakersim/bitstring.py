"""Finite binary strings and exact dyadic fractions.

Strings are stored in increasing index order, ``bits[0]`` being the 1-indexed
bit 1. Decreasing-index slices such as xi_{n:1} are obtained with
:meth:`BitString.slice` (or :func:`reverse`).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering
from fractions import Fraction
from typing import Iterable, Union

MAX_BITS = 63


@total_ordering
@dataclass(frozen=True)
class DyadicFraction:
    """Exact value ``numerator / 2**exponent``."""

    numerator: int
    exponent: int

    def __post_init__(self):
        if self.exponent < 0:
            raise ValueError("exponent must be non-negative")
        if self.numerator < 0:
            raise ValueError("numerator must be non-negative")

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __float__(self) -> float:
        return self.numerator / (1 << self.exponent)

    def __eq__(self, other):
        if isinstance(other, DyadicFraction):
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, DyadicFraction):
            return self.value < other.value
        if isinstance(other, (int, Fraction)):
            return self.value < other
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __sub__(self, other: "DyadicFraction") -> Fraction:
        return self.value - other.value

    def __str__(self):
        return f"{self.numerator}/2^{self.exponent}"


@dataclass(frozen=True)
class BitString:
    """An immutable finite sequence of bits."""

    bits: tuple[int, ...] = ()

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"bits must be 0 or 1, got {self.bits!r}")
        if len(bits) > MAX_BITS:
            raise ValueError(f"at most {MAX_BITS} bits supported, got {len(bits)}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def parse(cls, text: str) -> "BitString":
        if any(c not in "01" for c in text):
            raise ValueError(f"not a bit literal: {text!r}")
        return cls(tuple(int(c) for c in text))

    @classmethod
    def from_int(cls, value: int, length: int) -> "BitString":
        """The ``length``-bit big-endian expansion of ``value``."""
        if not 0 <= value < (1 << length):
            raise ValueError(f"{value} does not fit in {length} bits")
        return cls(tuple((value >> (length - 1 - i)) & 1 for i in range(length)))

    def slice(self, s: int, f: int) -> "BitString":
        """1-indexed slice xi_{s:f}; decreasing when ``s > f``.

        ``slice(s, s - 1)`` and the decreasing ``slice(0, 1)`` (xi_{0:1}) are
        empty.
        """
        if (s, f) == (0, 1):
            return BitString()
        if s <= f or f == s - 1:
            if s < 1 or f > len(self):
                raise IndexError(f"slice {s}:{f} out of range for length {len(self)}")
            return BitString(self.bits[s - 1:f])
        if f < 1 or s > len(self):
            raise IndexError(f"slice {s}:{f} out of range for length {len(self)}")
        return BitString(self.bits[f - 1:s][::-1])

    def bit(self, k: int) -> int:
        """1-indexed bit access, xi_k."""
        if not 1 <= k <= len(self):
            raise IndexError(k)
        return self.bits[k - 1]

    def __len__(self):
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return BitString(self.bits[item])
        return self.bits[item]

    def __add__(self, other: "BitString") -> "BitString":
        return concat(self, other)

    def __str__(self):
        return "".join(map(str, self.bits))

    def __repr__(self):
        return f"BitString('{self}')"


BitsLike = Union[BitString, str, Iterable[int]]


def as_bits(a: BitsLike) -> BitString:
    if isinstance(a, BitString):
        return a
    if isinstance(a, str):
        return BitString.parse(a)
    return BitString(tuple(a))


def to_nat(a: BitsLike) -> int:
    """Natural number with ``a``'s first bit most significant."""
    value = 0
    for b in as_bits(a):
        value = (value << 1) | b
    return value


def concat(a: BitsLike, b: BitsLike) -> BitString:
    return BitString(as_bits(a).bits + as_bits(b).bits)


def reverse(a: BitsLike) -> BitString:
    return BitString(as_bits(a).bits[::-1])


def dotted_frac(a: BitsLike) -> DyadicFraction:
    """Exact value of the binary fraction ``0.a1``."""
    a = as_bits(a)
    return DyadicFraction(2 * to_nat(a) + 1, len(a) + 1)


def sigma(a: BitsLike) -> int:
    """Number of set bits."""
    return sum(as_bits(a))
