"""Dense small-matrix numerics shared by every analysis module.

Thin, validating wrappers around numpy/scipy routines: matrix exponential
(scaling-and-squaring Pade), eigenvalues (Hessenberg + shifted QR via
LAPACK), induced 2-norm, LU-based determinant and solve, and the matrix
commutator.  All functions are pure and operate on plain ``numpy.ndarray``
values of float dtype.
"""

from __future__ import annotations

import warnings

import numpy as np
import scipy.linalg


class LinalgError(Exception):
    """Base class for numerical-kernel failures."""


class DimensionError(LinalgError, ValueError):
    """Input has the wrong shape (non-square, mismatched sizes)."""


class SingularMatrixError(LinalgError):
    """Linear solve hit a (near-)zero pivot."""

    def __init__(self, message: str, pivot: float):
        super().__init__(message)
        self.pivot = pivot


class NumericalError(LinalgError):
    """Iterative kernel failed to converge."""

    def __init__(self, message: str, iterations: int = 0):
        super().__init__(message)
        self.iterations = iterations


def as_matrix(M) -> np.ndarray:
    """Validate and coerce to a finite 2-d float array."""
    A = np.asarray(M, dtype=float)
    if A.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    return A


def as_square(M) -> np.ndarray:
    A = as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    return A


def as_vector(v) -> np.ndarray:
    x = np.asarray(v, dtype=float)
    if x.ndim != 1:
        raise DimensionError(f"expected a 1-d vector, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("vector entries must be finite")
    return x


def mat_exp(M) -> np.ndarray:
    """Matrix exponential e^M (scaling-and-squaring with Pade approximant)."""
    return scipy.linalg.expm(as_square(M))


def spectrum(M) -> np.ndarray:
    """All eigenvalues of a square real matrix, as a complex array."""
    A = as_square(M)
    try:
        return np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:  # QR iteration failed to converge
        raise NumericalError(f"eigenvalue iteration did not converge: {exc}",
                             iterations=100 * A.shape[0]) from exc


def spectral_radius(M) -> float:
    """max |lambda| over the eigenvalues of M."""
    return float(np.max(np.abs(spectrum(M))))


def spectral_abscissa(M) -> float:
    """max Re(lambda) over the eigenvalues of M."""
    return float(np.max(spectrum(M).real))


def operator_norm_2(M) -> float:
    """Induced 2-norm, sqrt of the spectral radius of M^T M."""
    return float(np.linalg.norm(as_matrix(M), 2))


def determinant(M) -> float:
    return float(np.linalg.det(as_square(M)))


def solve(M, rhs) -> np.ndarray:
    """Solve M x = rhs by LU with partial pivoting.

    Raises SingularMatrixError, carrying the offending pivot magnitude,
    when the factorisation produces a pivot at round-off level.
    """
    A = as_square(M)
    b = as_vector(rhs)
    if b.shape[0] != A.shape[0]:
        raise DimensionError(
            f"rhs length {b.shape[0]} does not match matrix size {A.shape[0]}")
    with warnings.catch_warnings():
        # the zero-pivot warning becomes a SingularMatrixError below
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    diag = np.abs(np.diag(lu))
    scale = max(np.max(np.abs(A)), 1.0)
    pivot_min = float(np.min(diag)) if diag.size else 0.0
    if pivot_min <= A.shape[0] * np.finfo(float).eps * scale:
        raise SingularMatrixError(
            f"matrix is singular to working precision (pivot {pivot_min:.3e})",
            pivot=pivot_min)
    return scipy.linalg.lu_solve((lu, piv), b, check_finite=False)


def commutator(X, Y) -> np.ndarray:
    """[X, Y] = XY - YX."""
    A = as_square(X)
    B = as_square(Y)
    if A.shape != B.shape:
        raise DimensionError(f"commutator shape mismatch: {A.shape} vs {B.shape}")
    return A @ B - B @ A
