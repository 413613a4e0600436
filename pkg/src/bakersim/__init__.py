"""Quantum baker's maps on N qubits: bases, closed-form matrix elements and the classical limit."""

from .baker import BakerMap, build_baker, c_first, c_first_table, direct_table, phase_phi
from .bases import basis_matrix, momentum_state, partial_fourier_state, position_state
from .bitstring import BitString, DyadicFraction, concat, dotted_frac, reverse, sigma, to_nat
from .classical import PhasePoint, SymbolicState, classical_step, shift, to_point
from .coarse import CoarseGrainSpec, ExperimentRecord, atypical_fidelity, fidelity, projector, rho

__version__ = "0.1.0"

__all__ = [
    "BakerMap", "BitString", "CoarseGrainSpec", "DyadicFraction", "ExperimentRecord",
    "PhasePoint", "SymbolicState", "atypical_fidelity", "basis_matrix", "build_baker",
    "c_first", "c_first_table", "classical_step", "concat", "direct_table", "dotted_frac",
    "fidelity", "momentum_state", "partial_fourier_state", "phase_phi", "position_state",
    "projector", "reverse", "rho", "shift", "sigma", "to_nat", "to_point",
]
