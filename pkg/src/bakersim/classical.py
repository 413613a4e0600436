"""Classical baker's transformation and its symbolic form, the Bernoulli shift.

Everything here is exact (``fractions.Fraction``); it is the reference the
quantum maps are compared against.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bitstring import BitString, BitsLike, as_bits, reverse, to_nat

HALF = Fraction(1, 2)


class SymbolicPrecisionError(IndexError):
    """Raised when shifting a symbolic state whose right part is exhausted."""


@dataclass(frozen=True)
class PhasePoint:
    q: Fraction
    p: Fraction

    def __post_init__(self):
        q, p = Fraction(self.q), Fraction(self.p)
        if not (0 <= q <= 1 and 0 <= p <= 1):
            raise ValueError(f"point ({q}, {p}) is outside the unit square")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class SymbolicState:
    """Finite truncation ``left . right`` of a bi-infinite symbolic string.

    ``left`` holds ``... s_{-1} s_0`` with ``s_0`` last; ``right`` holds
    ``s_1 s_2 ...``.
    """

    left: BitString = BitString()
    right: BitString = BitString()

    def __post_init__(self):
        object.__setattr__(self, "left", as_bits(self.left))
        object.__setattr__(self, "right", as_bits(self.right))

    def __str__(self):
        return f"{self.left}.{self.right}"


def _binary_fraction(bits: BitsLike) -> Fraction:
    bits = as_bits(bits)
    return Fraction(to_nat(bits), 1 << len(bits))


def classical_step(pt: PhasePoint) -> PhasePoint:
    """One application of the baker's transformation; ``q == 1/2`` takes the first branch."""
    if pt.q <= HALF:
        return PhasePoint(2 * pt.q, pt.p / 2)
    return PhasePoint(2 * pt.q - 1, (pt.p + 1) / 2)


def shift(s: SymbolicState) -> SymbolicState:
    """Move the dot one place to the right (the string moves left)."""
    if len(s.right) == 0:
        raise SymbolicPrecisionError("no bits left of finite symbolic precision")
    return SymbolicState(s.left + s.right[:1], s.right[1:])


def to_point(s: SymbolicState) -> PhasePoint:
    return PhasePoint(_binary_fraction(s.right), _binary_fraction(reverse(s.left)))


def is_branch_boundary(s: SymbolicState) -> bool:
    """True when ``q == 1/2`` exactly.

    There the finite expansion ``0.10...0`` and the map's boundary convention
    pick different branches, so shift and map disagree.
    """
    return to_point(s).q == HALF


def cell_centers(q_bits: int, p_bits: int) -> set[PhasePoint]:
    """Centres ((i+1/2)/2^a, (j+1/2)/2^b) of the dyadic grid with a q-bits, b p-bits."""
    return {
        PhasePoint(Fraction(2 * i + 1, 2 << q_bits), Fraction(2 * j + 1, 2 << p_bits))
        for i in range(1 << q_bits)
        for j in range(1 << p_bits)
    }
