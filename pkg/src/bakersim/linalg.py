"""Dense complex linear algebra on plain numpy arrays.

State vectors are 1-d ``complex128`` arrays of length 2**N, operators are
square 2-d arrays. Qubit 1 is the most significant bit of an index.
"""

import numpy as np

STRUCTURAL_TOL = 1e-12
STRUCTURAL_TOL_LARGE = 1e-10


def structural_tol(qubits):
    """Absolute tolerance for deltas, orthonormality and unitarity at ``qubits``."""
    return STRUCTURAL_TOL if qubits <= 10 else STRUCTURAL_TOL_LARGE


def qubit_count(x):
    """log2 of the leading dimension, checking it is a power of two (and square)."""
    x = np.asarray(x)
    dim = x.shape[0]
    if dim < 1 or dim & (dim - 1):
        raise ValueError(f"dimension {dim} is not a power of two")
    if x.ndim == 2 and x.shape[1] != dim:
        raise ValueError(f"operator of shape {x.shape} is not square")
    return dim.bit_length() - 1


def basis_vector(qubits, index):
    v = np.zeros(1 << qubits, dtype=complex)
    v[index] = 1.0
    return v


def tensor(*factors):
    """Kronecker product; the first factor is most significant."""
    out = np.ones(1, dtype=complex)
    for f in factors:
        out = np.kron(out, np.asarray(f, dtype=complex))
    return out


def _check_same(a, b, what):
    if a.shape != b.shape:
        raise ValueError(f"{what}: dimension mismatch {a.shape} vs {b.shape}")


def inner(a, b):
    """<a|b>, conjugate-linear in ``a``."""
    a, b = np.asarray(a), np.asarray(b)
    _check_same(a, b, "inner")
    return complex(np.vdot(a, b))


def norm(v):
    return float(np.linalg.norm(v))


def adjoint(op):
    return np.asarray(op).conj().T


def matmul(a, b):
    a, b = np.asarray(a), np.asarray(b)
    if a.shape[-1] != b.shape[0]:
        raise ValueError(f"matmul: cannot compose {a.shape} with {b.shape}")
    return a @ b


def apply(op, vec):
    """``op |vec>``; ``vec`` may also be a stack of column vectors."""
    return matmul(op, vec)


def unitarity_defect(u):
    """max |U^dagger U - I|."""
    u = np.asarray(u)
    qubit_count(u)
    return float(np.abs(u.conj().T @ u - np.eye(u.shape[0])).max())


def is_hermitian(op, tol=STRUCTURAL_TOL):
    op = np.asarray(op)
    return op.ndim == 2 and op.shape[0] == op.shape[1] and np.abs(op - op.conj().T).max() <= tol


def hs_distance(r1, r2, tol=STRUCTURAL_TOL):
    """Hilbert-Schmidt distance sqrt(Tr (r1 - r2)^2) between Hermitian matrices."""
    r1, r2 = np.asarray(r1), np.asarray(r2)
    _check_same(r1, r2, "hs_distance")
    if not (is_hermitian(r1, tol) and is_hermitian(r2, tol)):
        raise ValueError("hs_distance needs Hermitian arguments")
    diff = r1 - r2
    # Tr(A^2) = sum |A_ij|^2 for Hermitian A
    return float(np.sqrt(np.sum(np.abs(diff) ** 2)))


def trace(op):
    return complex(np.trace(op))


def mixture(states, weights=None):
    """Density matrix sum_i w_i |s_i><s_i| from state columns; uniform weights by default."""
    states = np.asarray(states)
    if weights is None:
        weights = np.full(states.shape[1], 1.0 / states.shape[1])
    return (states * weights) @ states.conj().T
