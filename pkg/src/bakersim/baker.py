"""Quantum baker's maps and their closed-form first-iteration matrix elements.

For split ``n`` the map sends column xi of V_n to column xi of V_{n+1}, so
``B = V_{n+1} V_n^dagger``. Matrix elements are taken in the split-n frame,
``C(xi0, xi1) = <xi1| B |xi0>``: row xi1, column xi0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bases import basis_matrix, basis_state, labels
from .bitstring import BitString, BitsLike, as_bits, to_nat
from .linalg import unitarity_defect

_SQRT_HALF = np.sqrt(0.5)


def _check_split(qubits, split):
    if qubits < 2:
        raise ValueError(f"need at least 2 qubits, got N={qubits}")
    if not 0 <= split <= qubits - 1:
        raise ValueError(f"split must satisfy 0 <= n <= N-1, got n={split}, N={qubits}")


@dataclass(frozen=True)
class BakerMap:
    qubits: int
    split: int
    operator: Optional[np.ndarray] = None

    def apply(self, vec):
        if self.operator is None:
            raise ValueError("map is not materialized")
        return self.operator @ vec

    @property
    def unitarity_defect(self):
        return unitarity_defect(self.operator)


def build_baker(qubits, split) -> BakerMap:
    _check_split(qubits, split)
    op = basis_matrix(qubits, split + 1) @ basis_matrix(qubits, split).conj().T
    return BakerMap(qubits, split, op)


def baker_from_outer_products(qubits, split):
    """sum_xi |xi_{1:n+1}.xi_{n+2:N}><xi_{1:n}.xi_{n+1:N}|, from individually built states."""
    _check_split(qubits, split)
    dim = 1 << qubits
    op = np.zeros((dim, dim), dtype=complex)
    for xi in labels(qubits):
        op += np.outer(basis_state(qubits, split + 1, xi), basis_state(qubits, split, xi).conj())
    return op


def direct_table(qubits, split):
    """V_n^dagger V_{n+1}: the matrix elements by brute-force construction."""
    _check_split(qubits, split)
    return basis_matrix(qubits, split).conj().T @ basis_matrix(qubits, split + 1)


def phase_phi(xi0_first, xi1_last):
    """(i (-1)^{xi1_N} - (-1)^{xi0_1}) / sqrt 2."""
    if xi0_first not in (0, 1) or xi1_last not in (0, 1):
        raise ValueError("phase_phi takes bits")
    return _SQRT_HALF * (1j * (-1) ** xi1_last - (-1) ** xi0_first)


def _reverse_int(value, width):
    out = 0
    for _ in range(width):
        out = (out << 1) | (value & 1)
        value >>= 1
    return out


def sine_argument(qubits, split, j0, j1):
    """Exact odd numerator ``t`` of 0.xi0_{n+1:1}1 - 0.xi1_{n:1}1 = t / 2^{n+2}."""
    a = 2 * _reverse_int(j0 >> (qubits - split - 1), split + 1) + 1
    b = 2 * _reverse_int(j1 >> (qubits - split), split) + 1
    t = a - 2 * b
    # odd numerators over different powers of two never coincide
    assert t & 1, "sine argument must have an odd numerator"
    return t


def _c_first_index(qubits, split, j0, j1):
    width = qubits - split - 1
    mask = (1 << width) - 1
    if (j0 & mask) != ((j1 >> 1) & mask):
        return 0j
    first0 = j0 >> (qubits - 1)
    last1 = j1 & 1
    if split == 0:
        return (1 - 1j) / 2 * np.exp(0.5j * np.pi * abs(first0 - last1))
    t = sine_argument(qubits, split, j0, j1)
    return phase_phi(first0, last1) / ((1 << (split + 1)) * np.sin(np.pi * t / (1 << (split + 2))))


def c_first(qubits, split, xi0: BitsLike, xi1: BitsLike) -> complex:
    """Closed-form <xi1| B |xi0> in the split-n frame.

    Covers the three cases n = 0, 1 <= n <= N-2 and n = N-1 (where
    the position delta is over empty strings).
    """
    _check_split(qubits, split)
    xi0, xi1 = as_bits(xi0), as_bits(xi1)
    if len(xi0) != qubits or len(xi1) != qubits:
        raise ValueError(f"labels must have {qubits} bits")
    return complex(_c_first_index(qubits, split, to_nat(xi0), to_nat(xi1)))


def c_first_table(qubits, split):
    """All closed-form elements as a matrix indexed [xi1, xi0]."""
    _check_split(qubits, split)
    dim = 1 << qubits
    table = np.empty((dim, dim), dtype=complex)
    for j0 in range(dim):
        for j1 in range(dim):
            table[j1, j0] = _c_first_index(qubits, split, j0, j1)
    return table


def c_first_column(qubits, split, j0, targets=None):
    """Closed-form amplitudes B|xi0> over ``targets`` (default all labels)."""
    if targets is None:
        targets = range(1 << qubits)
    return np.array([_c_first_index(qubits, split, j0, j1) for j1 in targets], dtype=complex)


def c_first_row_weight(qubits, split, xi0: BitsLike) -> float:
    """sum over xi1 of |C(xi0, xi1)|^2; unitarity makes this 1."""
    _check_split(qubits, split)
    xi0 = as_bits(xi0)
    return float(np.sum(np.abs(c_first_column(qubits, split, to_nat(xi0))) ** 2))


def peak_target(qubits, split, xi0: BitsLike, last_bit=0) -> BitString:
    """The label xi1 with xi1_j = xi0_{j+1} for j < N and the given free last bit.

    It satisfies both the position delta and the momentum peak condition.
    """
    xi0 = as_bits(xi0)
    return BitString(xi0.bits[1:] + (last_bit,))
