"""Finite machine checks of the identities behind the classical-limit proof.

Integer identities are exact; real-valued ones are evaluated in double
precision (``math.fsum`` where a long sum is involved).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np


def q_count(L, s):
    """Q(s): pairs (u, v), 0 <= u < 2^{L+1}, 0 <= v < 2^L, with u - 2v = s."""
    if L < 1:
        raise ValueError("L must be >= 1")
    # v is free; u = s + 2v must land in [0, 2^{L+1})
    return sum(1 for v in range(1 << L) if 0 <= s + 2 * v < (2 << L))


@lru_cache(maxsize=16)
def _difference_histogram(L):
    # every pair (u, v) enumerated once; index d + offset counts u - 2v = d
    u = np.arange(2 << L, dtype=np.int32)
    v2 = 2 * np.arange(1 << L, dtype=np.int32)
    offset = 2 * ((1 << L) - 1)
    counts = np.bincount((u[:, None] - v2[None, :]).ravel() + offset)
    counts.flags.writeable = False
    return counts, offset


def q_pair_sum_bruteforce(L, s):
    """Q(s) + Q(1 - s) by enumerating every pair (u, v)."""
    if L < 1:
        raise ValueError("L must be >= 1")
    counts, offset = _difference_histogram(L)

    def q(d):
        i = d + offset
        return int(counts[i]) if 0 <= i < len(counts) else 0

    return q(s) + q(1 - s)


def q_pair_sum_closed(L, s):
    """2^{L+1} - s + [1 - (-1)^s] / 2, valid for 1 <= s <= 2^{L+1} - 1."""
    if L < 1:
        raise ValueError("L must be >= 1")
    if not 1 <= s <= (2 << L) - 1:
        raise ValueError(f"closed form holds for 1 <= s <= {(2 << L) - 1}, got s={s}")
    return (2 << L) - s + (s & 1)


def cos_product_check(x, n):
    """Both sides of prod_{k<n} cos(2^k x) = sin(2^n x) / (2^n sin x)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    sx = math.sin(x)
    if abs(sx) < 1e-8:
        raise ValueError(f"x = {x} is (numerically) a multiple of pi")
    lhs = 1.0
    for k in range(n):
        lhs *= math.cos(math.ldexp(x, k))
    rhs = math.sin(math.ldexp(x, n)) / (math.ldexp(1.0, n) * sx)
    return lhs, rhs


def odd_inverse_square_partial(L):
    """sum_{s=1}^{2^L} (2s - 1)^{-2}, tending to pi^2 / 8."""
    if L < 1:
        raise ValueError("L must be >= 1")
    return math.fsum(1.0 / (2 * s - 1) ** 2 for s in range(1, (1 << L) + 1))


def odd_harmonic_ratio(L):
    """2^{-L} sum_{s=1}^{2^L} 1 / (2s - 1); this is O(L / 2^L)."""
    if L < 1:
        raise ValueError("L must be >= 1")
    return math.fsum(1.0 / (2 * s - 1) for s in range(1, (1 << L) + 1)) / (1 << L)


def catalan_partial(T):
    """sum_{t=0}^{T} (-1)^t / (2t + 1)^2."""
    if T < 1:
        raise ValueError("T must be >= 1")
    return math.fsum((-1) ** t / (2 * t + 1) ** 2 for t in range(T + 1))


def lower_bound_double_sum(L):
    """Exact sum_{u < 2^{L+1}} sum_{v < 2^L} (2u - 4v - 1)^{-2} as a Fraction."""
    return sum(
        (Fraction(1, (2 * u - 4 * v - 1) ** 2) for u in range(2 << L) for v in range(1 << L)),
        Fraction(0),
    )


def lower_bound_q_sum(L, exact=False):
    """The same double sum reduced to sum_{s} [Q(s) + Q(1-s)] / (2s - 1)^2."""
    terms = ((q_pair_sum_closed(L, s), (2 * s - 1) ** 2) for s in range(1, 2 << L))
    if exact:
        return sum((Fraction(q, d) for q, d in terms), Fraction(0))
    return math.fsum(q / d for q, d in terms)


def fidelity_lower_bound_sum(L):
    """(4 / (pi^2 2^L)) times the double sum; a lower bound on the one-step fidelity at L = r - k.

    Evaluated through the Q reduction, so it costs O(2^L) rather than O(4^L).
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    return 4.0 / (math.pi ** 2 * (1 << L)) * lower_bound_q_sum(L)
