"""Small dense complex matrices.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``; this
module only adds the checks and the few operations numpy does not provide
directly (partial traces over a bipartite space, a Jacobi eigensolver for
Hermitian matrices, positivity tests).

Basis convention
----------------
The particle (path) qubit is ordered ``(|b>, |a>)``::

    index 0  ->  |b>   (path b)
    index 1  ->  |a>   (path a)

so that ``sigma_z = |b><b| - |a><a| = diag(1, -1)`` and the Pauli matrices
take their textbook form.  Joint particle/detector operators are ordered
``particle (x) detector``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DimensionError, NotHermitianError
from .tolerances import TOL

IDX_B = 0
IDX_A = 1

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

KET_B = np.array([1, 0], dtype=complex)
KET_A = np.array([0, 1], dtype=complex)
PROJ_B = np.outer(KET_B, KET_B.conj())
PROJ_A = np.outer(KET_A, KET_A.conj())


@dataclass(frozen=True)
class HermitianCheckReport:
    max_asymmetry: float
    min_eigenvalue: float
    trace: complex


def cmatrix(entries, rows=None, cols=None):
    """Coerce ``entries`` to a finite 2-D complex array.

    ``entries`` may be nested sequences, an array, or a flat row-major
    sequence together with ``rows`` and ``cols``.
    """
    m = np.array(entries, dtype=complex)
    if rows is not None or cols is not None:
        if rows is None or cols is None:
            raise DimensionError("rows and cols must be given together")
        if m.size != rows * cols:
            raise DimensionError(f"{m.size} entries cannot fill a {rows}x{cols} matrix")
        m = m.reshape(rows, cols)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def dagger(a):
    return np.conj(np.transpose(a))


def ket_bra(ket, bra=None):
    """``|ket><bra|``; with one argument, the projector onto ``ket``."""
    ket = np.asarray(ket, dtype=complex)
    bra = ket if bra is None else np.asarray(bra, dtype=complex)
    return np.outer(ket, bra.conj())


def matmul(a, b):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(a, b):
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def trace(m):
    return complex(np.trace(m))


def partial_trace(m, dims, keep):
    """Reduce an operator on ``H_0 (x) H_1`` to the subsystem ``keep``.

    Parameters
    ----------
    m : array, shape (d0*d1, d0*d1)
    dims : pair of int
        ``(d0, d1)``.
    keep : {0, 1}
        Index of the subsystem that survives.
    """
    d0, d1 = (int(d) for d in dims)
    m = np.asarray(m, dtype=complex)
    if m.shape != (d0 * d1, d0 * d1):
        raise DimensionError(f"matrix of shape {m.shape} does not match dims {dims}")
    t = m.reshape(d0, d1, d0, d1)
    if keep == 0:
        return np.einsum("ijkj->ik", t)
    if keep == 1:
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 0 or 1, got {keep!r}")


def max_asymmetry(m):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return float(np.max(np.abs(m - dagger(m)))) if m.size else 0.0


def is_hermitian(m, tol=TOL.hermitian_gate):
    return max_asymmetry(m) <= tol


def _jacobi_sweep(a):
    n = a.shape[0]
    for p in range(n - 1):
        for q in range(p + 1, n):
            apq = a[p, q]
            mag = abs(apq)
            app = a[p, p].real
            aqq = a[q, q].real
            # negligible against the diagonal: drop it instead of rotating
            if mag < 1e-300 or mag < 1e-18 * (abs(app) + abs(aqq)):
                a[p, q] = 0.0
                a[q, p] = 0.0
                continue
            # rotate the phase of a[p, q] away so the pivot block is real
            ph = complex(apq.real / mag, apq.imag / mag)
            a[:, q] *= ph.conjugate()
            a[q, :] *= ph
            theta = (aqq - app) / (2.0 * mag)
            t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            col_p = a[:, p].copy()
            col_q = a[:, q].copy()
            a[:, p] = c * col_p - s * col_q
            a[:, q] = s * col_p + c * col_q
            row_p = a[p, :].copy()
            row_q = a[q, :].copy()
            a[p, :] = c * row_p - s * row_q
            a[q, :] = s * row_p + c * row_q
            a[p, q] = 0.0
            a[q, p] = 0.0


def _offdiag_norm(a):
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def eig_hermitian(m, tol=TOL.hermitian_gate):
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.

    The input is symmetrized as ``(m + m^H)/2`` after the Hermiticity gate.
    Returns the eigenvalues as an ascending float array.

    Raises
    ------
    NotHermitianError
        If ``max |m_ij - conj(m_ji)|`` exceeds ``tol``.
    ConvergenceError
        If the off-diagonal norm is still above threshold after the sweep
        budget is exhausted.
    """
    m = np.asarray(m, dtype=complex)
    asym = max_asymmetry(m)
    if asym > tol:
        raise NotHermitianError(f"matrix is not Hermitian (max asymmetry {asym:.3e})")
    a = 0.5 * (m + dagger(m))
    n = a.shape[0]
    if n == 0:
        return np.zeros(0)
    scale = max(1.0, float(np.linalg.norm(a)))
    threshold = TOL.jacobi_offdiag * scale
    for _ in range(TOL.jacobi_max_sweeps):
        if _offdiag_norm(a) <= threshold:
            break
        _jacobi_sweep(a)
    else:
        if _offdiag_norm(a) > threshold:
            raise ConvergenceError(
                f"Jacobi iteration did not converge in {TOL.jacobi_max_sweeps} sweeps"
            )
    return np.sort(np.diag(a).real)


def hermitian_report(m):
    m = np.asarray(m, dtype=complex)
    asym = max_asymmetry(m)
    h = 0.5 * (m + dagger(m))
    return HermitianCheckReport(
        max_asymmetry=asym,
        min_eigenvalue=float(eig_hermitian(h)[0]) if h.size else 0.0,
        trace=trace(m),
    )


def is_psd(m, tol=TOL.algebraic):
    """True iff the smallest eigenvalue of Hermitian ``m`` is >= ``-tol``."""
    return bool(eig_hermitian(m)[0] >= -tol)


def is_unitary(u, tol=TOL.algebraic):
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0]))) <= tol)
