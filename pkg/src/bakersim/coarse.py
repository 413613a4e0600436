"""Coarse-grained projectors, uniform mixtures and classical-limit fidelities.

All projectors live in the split-n frame V_n. In label language the
projector ``P^{r,k}_y`` keeps every N-bit label whose bits ``r-k+1 .. r-k+l``
(the window ``k`` places left of the end) spell ``y``; both cases
(k < m and k >= m) put the dot after ``n`` bits, so only the window moves.

The fidelity path never forms rho_0: it evolves the 2^r pure states that
make it up and averages their projection weights.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from .baker import _c_first_index
from .bases import basis_matrix
from .bitstring import BitString, BitsLike, as_bits, to_nat
from .linalg import hs_distance, mixture

DENSE_LIMIT = 13
DISTANCE_LIMIT = 12
TYPICAL_THRESHOLD = 0.95
CENSUS_ENVELOPE = 25


@dataclass(frozen=True)
class CoarseGrainSpec:
    """Parameters (N, n, y, k) of a coarse-graining experiment.

    ``r = N - |y|`` bits are ignored and ``m = N - n`` position bits sit right
    of the dot. Requires ``0 <= k <= k_max < r``.
    """

    qubits: int
    split: int
    y: BitString
    k: int = 0
    k_max: int = 3

    def __post_init__(self):
        object.__setattr__(self, "y", as_bits(self.y))
        if len(self.y) < 1:
            raise ValueError("coarse-graining string y must be non-empty")
        if not 0 <= self.split <= self.qubits - 1:
            raise ValueError(f"need m = N - n >= 1 and n >= 0, got N={self.qubits}, n={self.split}")
        if self.r < 1:
            raise ValueError(f"|y| = {len(self.y)} leaves no ignored bits at N={self.qubits}")
        if not 0 <= self.k <= self.k_max < self.r:
            raise ValueError(f"need 0 <= k <= k_max < r, got k={self.k}, k_max={self.k_max}, r={self.r}")

    @classmethod
    def from_sizes(cls, qubits, m, y, k=0, k_max=3):
        return cls(qubits, qubits - m, as_bits(y), k, k_max)

    @property
    def l(self):
        return len(self.y)

    @property
    def r(self):
        return self.qubits - len(self.y)

    @property
    def m(self):
        return self.qubits - self.split

    def with_k(self, k):
        return CoarseGrainSpec(self.qubits, self.split, self.y, k, self.k_max)


@dataclass(frozen=True)
class ExperimentRecord:
    N: int
    n: int
    l: int
    r: int
    k: int
    y: str
    fidelity: float
    bound_ratio: float
    atypical_flag: int

    def as_dict(self):
        return asdict(self)


def bound_ratio(fidelity, r, k):
    """(1 - F) 2^{r-k} / r, the empirical constant of the 1 - O(r/2^{r-k}) envelope."""
    return (1.0 - fidelity) * 2 ** (r - k) / r


def _resolve_k(spec, k):
    if k is None:
        return spec.k
    return spec.with_k(k).k


def window_mask(spec: CoarseGrainSpec, k=None):
    """Boolean mask over labels selected by P^{r,k}_y."""
    k = _resolve_k(spec, k)
    j = np.arange(1 << spec.qubits, dtype=np.int64)
    return ((j >> k) & ((1 << spec.l) - 1)) == to_nat(spec.y)


def initial_labels(spec: CoarseGrainSpec):
    """Column indices of the labels x y composing rho_0, ordered by to_nat(x)."""
    return (np.arange(1 << spec.r, dtype=np.int64) << spec.l) | to_nat(spec.y)


def window_overlap(y: BitsLike, shift):
    """Exact Tr[P^{r,k} rho_{k'}] for |k - k'| = shift.

    The two windows are compatible iff ``y`` agrees with itself shifted by
    ``shift`` places; the result is then 2^{-min(shift, l)}, else 0.
    """
    y = as_bits(y).bits
    shift = abs(shift)
    l = len(y)
    if shift < l and y[shift:] != y[:l - shift]:
        return 0.0
    return 2.0 ** -min(shift, l)


@lru_cache(maxsize=4)
def _frame(qubits, split):
    v = basis_matrix(qubits, split)
    v.flags.writeable = False
    return v


def _check_dense(spec, limit=DENSE_LIMIT):
    if spec.qubits > limit:
        raise ValueError(f"dense materialization limited to N <= {limit}, got N={spec.qubits}")


def projector(spec: CoarseGrainSpec, k=None):
    """Dense rank-2^r orthogonal projector P^{r,k}_y."""
    _check_dense(spec)
    cols = _frame(spec.qubits, spec.split)[:, window_mask(spec, k)]
    return cols @ cols.conj().T


def rho(spec: CoarseGrainSpec, k=None):
    """Uniform mixture 2^{-r} P^{r,k}_y."""
    return projector(spec, k) / 2 ** spec.r


def evolved_states(spec: CoarseGrainSpec, k=None):
    """Columns B^k |x y^1.y^2> for every x, as position-basis vectors."""
    _check_dense(spec)
    k = _resolve_k(spec, k)
    vn = _frame(spec.qubits, spec.split)
    psi = vn[:, initial_labels(spec)]
    if k:
        vn1 = _frame(spec.qubits, spec.split + 1)
        for _ in range(k):
            # B = V_{n+1} V_n^dagger, applied without forming B
            psi = vn1 @ (vn.conj().T @ psi)
    return psi


def per_state_fidelities(spec: CoarseGrainSpec):
    """Tr[P^{r,k} B^k |x y><x y| B^dagger^k] for all x, ordered by to_nat(x)."""
    if spec.k == 0:
        return np.ones(1 << spec.r)
    amp = _frame(spec.qubits, spec.split).conj().T @ evolved_states(spec)
    return np.sum(np.abs(amp[window_mask(spec)]) ** 2, axis=0)


def per_state_fidelity(spec: CoarseGrainSpec, x: BitsLike) -> float:
    x = as_bits(x)
    if len(x) != spec.r:
        raise ValueError(f"x must have r = {spec.r} bits, got {len(x)}")
    return float(per_state_fidelities(spec)[to_nat(x)])


def fidelity(spec: CoarseGrainSpec) -> float:
    """Tr[P^{r,k} B^k rho_0 B^dagger^k] as the average over the 2^r pure states."""
    w = per_state_fidelities(spec)
    # fsum is correctly rounded, so the result does not depend on summation order
    return float(math.fsum(w) / len(w))


def fidelity_dense(spec: CoarseGrainSpec) -> float:
    """Same trace through dense rho_0 and B; only for cross-checks (N <= 10)."""
    _check_dense(spec, 10)
    vn = _frame(spec.qubits, spec.split)
    b = _frame(spec.qubits, spec.split + 1) @ vn.conj().T
    bk = np.linalg.matrix_power(b, spec.k)
    evolved = bk @ rho(spec, 0) @ bk.conj().T
    return float(np.real(np.trace(projector(spec) @ evolved)))


def delta_law_matrix(spec: CoarseGrainSpec, ks):
    """Tr[P^{r,k} rho_{k'}] for k, k' in ``ks`` from dense operators."""
    rhos = {k: rho(spec, k) for k in ks}
    return np.array([[np.real(np.trace(projector(spec, k) @ rhos[kp])) for kp in ks] for k in ks])


def distance_to_shifted(spec: CoarseGrainSpec, k=None) -> float:
    """Hilbert-Schmidt distance d(rho_k, B^k rho_0 B^dagger^k), dense, N <= 12."""
    _check_dense(spec, DISTANCE_LIMIT)
    k = _resolve_k(spec, k)
    evolved = mixture(evolved_states(spec, k))
    return hs_distance(rho(spec, k), evolved, tol=1e-10)


def step_distance(spec: CoarseGrainSpec, k=None) -> float:
    """d(rho_k, B rho_{k-1} B^dagger) for k >= 1, dense."""
    _check_dense(spec, DISTANCE_LIMIT)
    k = _resolve_k(spec, k)
    if k < 1:
        raise ValueError("step distance needs k >= 1")
    vn = _frame(spec.qubits, spec.split)
    vn1 = _frame(spec.qubits, spec.split + 1)
    prev = vn[:, window_mask(spec, k - 1)]
    evolved = mixture(vn1 @ (vn.conj().T @ prev))
    return hs_distance(rho(spec, k), evolved, tol=1e-10)


def distance_from_fidelity(spec: CoarseGrainSpec, fid) -> float:
    """d = sqrt(2^{1-r} (1 - F)), since Tr rho_k^2 = 2^{-r} and Tr rho_k sigma = 2^{-r} F."""
    return math.sqrt(max(0.0, 2.0 ** (1 - spec.r) * (1.0 - fid)))


def closed_form_state_fidelity(split, r, y: BitsLike, x: BitsLike) -> float:
    """One-step weight of |x y^1.y^2> in P^{r,1}_y from closed-form amplitudes only.

    Sums |C(x y, x' y g)|^2 over the 2^r labels with |x'| = r - 1 and one free
    last bit g. No matrices, so N can go up to the 63-bit label limit.
    """
    y, x = as_bits(y), as_bits(x)
    qubits = r + len(y)
    if len(x) != r:
        raise ValueError(f"x must have r = {r} bits")
    if r < 2:
        raise ValueError("one coarse-grained step needs r >= 2")
    if not 0 <= split <= qubits - 1:
        raise ValueError(f"need 0 <= n <= N-1, got n={split}, N={qubits}")
    j0 = (to_nat(x) << len(y)) | to_nat(y)
    ybits = to_nat(y) << 1
    amps = []
    for top in range(1 << (r - 1)):
        base = (top << (len(y) + 1)) | ybits
        for g in (0, 1):
            amps.append(abs(_c_first_index(qubits, split, j0, base | g)) ** 2)
    return math.fsum(amps)


def closed_form_fidelity(split, r, y: BitsLike) -> float:
    """k = 1 fidelity averaged over all 2^r initial states, closed form only."""
    weights = [closed_form_state_fidelity(split, r, y, BitString.from_int(i, r)) for i in range(1 << r)]
    return math.fsum(weights) / len(weights)


def atypical_fidelity(split, r, y: BitsLike) -> float:
    """One-step weight of the all-zeros state |0^r y^1.y^2>, closed form only."""
    return closed_form_state_fidelity(split, r, y, BitString((0,) * r))


def catalan_limit(terms=100_000):
    """(pi^2 + 8G) / (2 pi^2) with G from the alternating series."""
    from .identities import catalan_partial

    g = catalan_partial(terms)
    return (math.pi ** 2 + 8 * g) / (2 * math.pi ** 2)


def census(spec: CoarseGrainSpec, threshold=TYPICAL_THRESHOLD):
    """Count basis strings x whose per-state fidelity falls below ``threshold``."""
    w = per_state_fidelities(spec)
    below = int(np.count_nonzero(w < threshold))
    envelope = CENSUS_ENVELOPE * spec.r / 2 ** (spec.r - spec.k)
    return {
        "N": spec.qubits,
        "n": spec.split,
        "r": spec.r,
        "k": spec.k,
        "y": str(spec.y),
        "threshold": threshold,
        "states": len(w),
        "below": below,
        "fraction": below / len(w),
        "envelope": envelope,
        "zero_state_fidelity": float(w[0]),
        "zero_state_atypical": bool(w[0] < threshold),
        "atypical_x": [str(BitString.from_int(i, spec.r)) for i in np.flatnonzero(w < threshold)],
    }


def run_point(spec: CoarseGrainSpec) -> ExperimentRecord:
    w = per_state_fidelities(spec)
    fid = float(math.fsum(w) / len(w))
    return ExperimentRecord(
        N=spec.qubits,
        n=spec.split,
        l=spec.l,
        r=spec.r,
        k=spec.k,
        y=str(spec.y),
        fidelity=fid,
        bound_ratio=bound_ratio(fid, spec.r, spec.k),
        atypical_flag=int(w[0] < TYPICAL_THRESHOLD),
    )
