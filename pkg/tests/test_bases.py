import cmath
import itertools
from fractions import Fraction

import numpy as np
import pytest

from bakersim.bases import (
    basis_matrix,
    basis_state,
    dotted_position_state,
    labels,
    momentum_kernel_state,
    momentum_state,
    partial_fourier_state,
    position_state,
    position_value,
)
from bakersim.bitstring import BitString, dotted_frac, reverse, to_nat
from bakersim.linalg import inner, norm, unitarity_defect


def scripted_expansion(N, n, bits):
    """Amplitude-by-amplitude expansion of the partial-Fourier tensor product."""

    def frac(bs):  # 0.bs1 as a Fraction
        v = Fraction(1, 2 ** (len(bs) + 1))
        for i, b in enumerate(bs):
            v += Fraction(b, 2 ** (i + 1))
        return v

    xi = list(bits)
    out = np.zeros(2 ** N, dtype=complex)
    glob = cmath.exp(1j * cmath.pi * float(frac(xi[:n][::-1])))
    for index in range(2 ** N):
        digits = [(index >> (N - 1 - i)) & 1 for i in range(N)]
        if digits[: N - n] != xi[n:]:
            continue
        amp = glob / 2 ** (n / 2)
        for k in range(1, n + 1):
            if digits[N - n + k - 1]:
                amp *= cmath.exp(2j * cmath.pi * float(frac(xi[:k][::-1])))
        out[index] = amp
    return out


def test_position_state():
    np.testing.assert_array_equal(position_state(2, "01"), [0, 1, 0, 0])
    with pytest.raises(ValueError):
        position_state(3, "01")


def test_position_eigenvalue():
    D = 8
    for j in range(D):
        assert position_value(BitString.from_int(j, 3)).value == Fraction(2 * j + 1, 2 * D)
    assert position_value("000").value == Fraction(1, 16)


def test_dotted_position_state():
    np.testing.assert_array_equal(dotted_position_state(1, "0"), [1j, 0])
    assert inner(position_state(3, "101"), dotted_position_state(3, "101")) == 1j
    assert norm(dotted_position_state(3, "101")) == 1


def test_partial_fourier_hand_value():
    # 0.xi_1 1 = binary 0.01 = 1/4: global phase e^{i pi/4}, relative phase e^{i pi/2}
    expected = np.exp(1j * np.pi / 4) * np.array([1, 1j, 0, 0]) / np.sqrt(2)
    assert np.abs(partial_fourier_state(2, 1, "00") - expected).max() < 1e-15


@pytest.mark.parametrize("N", range(2, 7))
def test_partial_fourier_matches_scripted_expansion(N):
    for n in range(1, N):
        for bits in labels(N):
            assert np.abs(partial_fourier_state(N, n, bits) - scripted_expansion(N, n, bits)).max() < 1e-12


def test_partial_fourier_range_checks():
    with pytest.raises(ValueError):
        partial_fourier_state(3, 0, "000")
    with pytest.raises(ValueError):
        partial_fourier_state(3, 3, "000")
    with pytest.raises(ValueError):
        partial_fourier_state(3, 1, "00")


def test_partial_fourier_gram_matrix():
    V = np.column_stack([partial_fourier_state(4, 2, b) for b in labels(4)])
    assert np.abs(V.conj().T @ V - np.eye(16)).max() < 1e-12


@pytest.mark.parametrize("N, n", [(4, 2), (6, 3), (8, 4), (8, 7)])
def test_position_localization(N, n):
    for bits in labels(N):
        psi = partial_fourier_state(N, n, bits)
        base = to_nat(bits[n:]) << n
        support = np.flatnonzero(np.abs(psi) > 1e-14)
        assert support.min() >= base and support.max() < base + 2 ** n
        assert len(support) == 2 ** n
        assert np.allclose(np.abs(psi[support]), 2 ** (-n / 2), atol=1e-14)


def test_momentum_localization():
    # at least half the momentum probability within the width-2^-n window at 0.xi_{n:1}1
    N, n = 8, 4
    D = 2 ** N
    K = np.column_stack([momentum_kernel_state(N, BitString.from_int(j, N)) for j in range(D)])
    pk = np.array([float(dotted_frac(reverse(BitString.from_int(j, N)))) for j in range(D)])
    worst = 1.0
    for bits in labels(N):
        prob = np.abs(K.conj().T @ partial_fourier_state(N, n, bits)) ** 2
        centre = float(dotted_frac(reverse(bits[:n])))
        worst = min(worst, prob[np.abs(pk - centre) <= 2.0 ** (-n - 1)].sum())
    assert worst >= 0.5


def test_momentum_state_modulus_and_gram():
    N = 3
    V = np.column_stack([momentum_state(N, b) for b in labels(N)])
    assert np.allclose(np.abs(V), 2 ** (-N / 2), atol=1e-15)
    assert np.abs(V.conj().T @ V - np.eye(8)).max() < 1e-12


@pytest.mark.parametrize("N", range(1, 9))
def test_momentum_state_equals_antiperiodic_kernel(N):
    for bits in labels(N):
        assert np.abs(momentum_state(N, bits) - momentum_kernel_state(N, bits)).max() < 1e-12


@pytest.mark.parametrize("N", range(1, 9))
def test_basis_matrix(N):
    for n in range(N + 1):
        V = basis_matrix(N, n)
        assert unitarity_defect(V) < 1e-12
        literal = np.column_stack([basis_state(N, n, b) for b in labels(N)]) if N <= 6 else None
        if literal is not None:
            assert np.abs(V - literal).max() < 1e-12


def test_basis_matrix_extremes():
    np.testing.assert_allclose(basis_matrix(3, 0), 1j * np.eye(8), atol=1e-15)
    for j, b in enumerate(labels(3)):
        assert np.abs(basis_matrix(3, 3)[:, j] - momentum_state(3, b)).max() < 1e-14
    with pytest.raises(ValueError):
        basis_matrix(3, 4)


def test_labels_column_order():
    assert [to_nat(b) for b in labels(4)] == list(range(16))
    assert all(len(b) == 4 for b in labels(4))
