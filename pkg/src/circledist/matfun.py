"""Dense linear algebra for small matrices: Jacobi spectra and norms.

Matrices here are tiny (n up to ~16), so a self-contained cyclic Jacobi
iteration is used instead of a LAPACK dependency.  Only spectra are needed,
never eigenvectors.
"""
from __future__ import annotations

import math

import numpy as np

_HERM_TOL = 1e-12
_OFF_TOL = 1e-12
_MAX_SWEEPS = 50


def _check_hermitian(M: np.ndarray) -> np.ndarray:
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    scale = max(1.0, float(np.max(np.abs(A))))
    if float(np.max(np.abs(A - A.conj().T))) > _HERM_TOL * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    return A


def _jacobi(M: np.ndarray) -> tuple:
    """Cyclic Jacobi on a Hermitian matrix; returns (eigenvalues, sweeps).

    Each rotation folds the pivot phase into column q and applies the real
    rotation that annihilates the pivot, so the working matrix stays
    Hermitian with a real diagonal throughout.
    """
    A = _check_hermitian(M).copy()
    n = A.shape[0]
    if n == 1:
        return np.array([A[0, 0].real]), 0

    fro = math.sqrt(float(np.sum(np.abs(A) ** 2)))
    stop = _OFF_TOL * max(fro, 1.0)

    sweeps = 0
    while sweeps < _MAX_SWEEPS:
        off = math.sqrt(2.0 * float(np.sum(np.abs(np.triu(A, 1)) ** 2)))
        if off <= stop:
            diag = np.sort(A.diagonal().real)
            return diag, sweeps
        for p in range(n - 1):
            for q in range(p + 1, n):
                z = A[p, q]
                az = abs(z)
                if az <= stop / n:
                    continue
                u = z.conjugate() / az
                theta = (A[q, q].real - A[p, p].real) / (2.0 * az)
                if theta == 0.0:
                    t = 1.0
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(1.0, theta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                cp = A[:, p].copy()
                cq = A[:, q] * u
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                rp = A[p, :].copy()
                rq = A[q, :] * u.conjugate()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
        sweeps += 1
    raise RuntimeError(f"Jacobi iteration did not converge in {_MAX_SWEEPS} sweeps")


def sym_eigenvalues(M: np.ndarray) -> np.ndarray:
    """Eigenvalues of a Hermitian (or real symmetric) matrix, ascending."""
    vals, _ = _jacobi(M)
    return vals


def trace_abs(M: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix (nuclear norm)."""
    vals, _ = _jacobi(M)
    return float(np.sum(np.abs(vals)))


def spectral_norm(M: np.ndarray) -> float:
    """Largest singular value of a square complex matrix.

    The 2x2 zero-diagonal form that shows up in flat-section commutators is
    dispatched to max|entry| directly; everything else goes through the
    Gram matrix and the Jacobi spectrum.
    """
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    if A.shape == (2, 2) and A[0, 0] == 0 and A[1, 1] == 0:
        return max(abs(A[0, 1]), abs(A[1, 0]))
    gram = A.conj().T @ A
    vals, _ = _jacobi(gram)
    top = float(vals[-1])
    return math.sqrt(top) if top > 0.0 else 0.0
