"""Position, momentum and partial-Fourier basis states on N qubits.

A label is a full string xi_{1:N} together with a split ``n``: the state
``|xi_{1:n}.xi_{n+1:N}>`` has the position bits xi_{n+1:N} on the leading
qubits and ``n`` Fourier-transformed qubits after them. The
basis-change matrix ``V_n`` has this state in column ``to_nat(xi)``.

Phases are accumulated as exact integers modulo a power of two and only
converted to floating point in the final ``exp``.
"""

import numpy as np

from .bitstring import BitString, BitsLike, as_bits, dotted_frac, reverse, to_nat
from .linalg import basis_vector, tensor

_SQRT_HALF = np.sqrt(0.5)


def _turns(numerator, exponent):
    """exp(2 pi i numerator / 2**exponent), reduced exactly before the float step."""
    period = 1 << exponent
    return np.exp(2j * np.pi * ((numerator % period) / period))


def _label(qubits, bits):
    bits = as_bits(bits)
    if len(bits) != qubits:
        raise ValueError(f"label {bits} has {len(bits)} bits, expected {qubits}")
    return bits


def position_state(qubits, bits: BitsLike):
    """|q_j> with j = to_nat(bits), i.e. position 0.bits1."""
    bits = _label(qubits, bits)
    return basis_vector(qubits, to_nat(bits))


def position_value(bits: BitsLike):
    """The eigenvalue (j + 1/2)/D of |q_j>, as an exact dyadic fraction."""
    return dotted_frac(bits)


def dotted_position_state(qubits, bits: BitsLike):
    """|.xi_{1:N}> = i |q_j>."""
    return 1j * position_state(qubits, bits)


def _fourier_product_state(qubits, split, bits):
    # Literal tensor product: position qubits xi_{n+1..N}, then one factor per
    # k = 1..n with relative phase exp[2 pi i 0.xi_{k:1}1], global phase exp[i pi 0.xi_{n:1}1].
    factors = []
    for b in bits[split:]:
        e = np.zeros(2, dtype=complex)
        e[b] = 1.0
        factors.append(e)
    for k in range(1, split + 1):
        theta = dotted_frac(reverse(bits[:k]))
        factors.append(_SQRT_HALF * np.array([1.0, _turns(theta.numerator, theta.exponent)]))
    glob = dotted_frac(reverse(bits[:split]))
    return _turns(glob.numerator, glob.exponent + 1) * tensor(*factors)


def partial_fourier_state(qubits, split, bits: BitsLike):
    """|xi_{1:n}.xi_{n+1:N}> for 1 <= n <= N-1."""
    if not 1 <= split <= qubits - 1:
        raise ValueError(f"split must satisfy 1 <= n <= N-1, got n={split}, N={qubits}")
    return _fourier_product_state(qubits, split, _label(qubits, bits))


def momentum_state(qubits, bits: BitsLike):
    """|xi_{1:N}.> = |p_k>, the all-Fourier (n = N) member of the family."""
    return _fourier_product_state(qubits, qubits, _label(qubits, bits))


def momentum_kernel_state(qubits, bits: BitsLike):
    """|p_k> from the antiperiodic kernel D^{-1/2} exp[2 pi i (j+1/2)(k+1/2)/D].

    ``k = to_nat(reverse(bits))`` so that p_k = 0.xi_{N:1}1. Cross-check for
    :func:`momentum_state`.
    """
    bits = _label(qubits, bits)
    dim = 1 << qubits
    k = to_nat(reverse(bits))
    j = np.arange(dim)
    # (2j+1)(2k+1) / (4D) turns, exact in integers
    return _turns((2 * j + 1) * (2 * k + 1), qubits + 2) / np.sqrt(dim)


def basis_state(qubits, split, bits: BitsLike):
    """Any member of the family: n = 0 dotted position, n = N momentum."""
    if split == 0:
        return dotted_position_state(qubits, bits)
    if split == qubits:
        return momentum_state(qubits, bits)
    return partial_fourier_state(qubits, split, bits)


def fourier_block(split):
    """The 2^n x 2^n matrix acting on the Fourier qubits, columns indexed by xi_{1:n}."""
    dim = 1 << split
    a = np.arange(dim, dtype=np.int64)
    # xi[:, i-1] = bit xi_i of the column label, xi_1 most significant
    xi = (a[:, None] >> (split - 1 - np.arange(split))[None, :]) & 1
    # rev[:, k-1] = to_nat(xi_k ... xi_1)
    rev = np.cumsum(xi << np.arange(split)[None, :], axis=1)
    coeff = (2 * rev + 1) << (split + 1 - np.arange(1, split + 1))[None, :]
    glob = 2 * rev[:, -1] + 1 if split else np.ones(1, dtype=np.int64)
    b = (a[:, None] >> (split - 1 - np.arange(split))[None, :]) & 1
    turns = glob[None, :] + b @ coeff.T
    return _turns(turns, split + 2) / np.sqrt(dim)


def basis_matrix(qubits, split):
    """Unitary V_n whose column ``to_nat(xi)`` is |xi_{1:n}.xi_{n+1:N}>."""
    if not 0 <= split <= qubits:
        raise ValueError(f"split must satisfy 0 <= n <= N, got n={split}, N={qubits}")
    block = fourier_block(split)
    fdim = 1 << split
    pdim = 1 << (qubits - split)
    v = np.zeros((1 << qubits, 1 << qubits), dtype=complex)
    for p in range(pdim):
        # rows: position p on top, Fourier bits below; columns: xi_{1:n} on top, p below
        v[p * fdim:(p + 1) * fdim, p::pdim] = block
    return v


def labels(qubits):
    """All N-bit labels in column order."""
    return [BitString.from_int(i, qubits) for i in range(1 << qubits)]
