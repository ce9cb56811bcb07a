"""Numerical tolerances shared by every module."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    algebraic: float = 1e-12
    hermitian_gate: float = 1e-10
    jacobi_offdiag: float = 1e-13
    jacobi_max_sweeps: int = 100
    bloch_norm: float = 1e-12
    degenerate_denominator: float = 1e-12
    indistinguishable: float = 1e-12
    clamp: float = 1e-14
    bound: float = 1e-9


TOL = Tolerances()
