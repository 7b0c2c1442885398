# Copyright (c) 2024, RoboVerse community
# SPDX-License-Identifier: BSD-3-Clause

"""
Dense linear algebra primitives for small matrices.
Covariance, symmetric inverse square root, SVD with a fixed sign convention,
and the Moore-Penrose pseudo-inverse. All computation is float64.
"""

import logging
from dataclasses import dataclass
import numpy as np
import numpy.typing as npt

from emg_align.domain.exceptions import ConvergenceError, DataError, DimensionError, ParameterError, SingularMatrixError

logger = logging.getLogger(__name__)

Matrix = npt.NDArray[np.float64]

SYMMETRY_TOLERANCE = 1e-9
PINV_CUTOFF_FACTOR = 1e-12


@dataclass(frozen=True)
class SvdResult:
    """Thin SVD: m = u @ diag(sigma) @ vt"""
    u: Matrix
    sigma: Matrix
    vt: Matrix

    def reconstruct(self) -> Matrix:
        return (self.u * self.sigma) @ self.vt


def as_matrix(values: npt.ArrayLike, name: str = "matrix") -> Matrix:
    """Validated float64 2-D matrix with finite entries"""
    matrix = np.asarray(values, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] < 1 or matrix.shape[1] < 1:
        raise DimensionError(f"{name} must be a non-empty 2-D matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise DataError(f"{name} contains NaN or Inf values")
    return matrix


def covariance(x: npt.ArrayLike, y: npt.ArrayLike) -> Matrix:
    """(1/T) X Y^T for already-centered n x T inputs"""
    x_m = as_matrix(x, "x")
    y_m = as_matrix(y, "y")
    if x_m.shape[1] != y_m.shape[1]:
        raise DimensionError(f"sample counts differ: {x_m.shape[1]} vs {y_m.shape[1]}")
    return (x_m @ y_m.T) / x_m.shape[1]


def inv_sqrt_sym(m: npt.ArrayLike, ridge: float = 0.0) -> Matrix:
    """(m + ridge I)^(-1/2) through the symmetric eigendecomposition"""
    matrix = as_matrix(m)
    if matrix.shape[0] != matrix.shape[1]:
        raise DimensionError(f"matrix must be square, got {matrix.shape}")
    if ridge < 0:
        raise ParameterError(f"ridge must be non-negative, got {ridge}")
    scale = max(1.0, float(np.max(np.abs(matrix))))
    if np.max(np.abs(matrix - matrix.T)) > SYMMETRY_TOLERANCE * scale:
        raise ParameterError("matrix is not symmetric")

    regularized = 0.5 * (matrix + matrix.T) + ridge * np.eye(matrix.shape[0])
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(regularized)
    except np.linalg.LinAlgError as e:
        raise ConvergenceError(f"symmetric eigendecomposition failed: {e}") from e

    if eigenvalues.min() <= 0:
        raise SingularMatrixError(
            f"matrix is not positive definite (smallest eigenvalue {eigenvalues.min():.3e}); "
            f"increase the ridge above {ridge}"
        )
    result = (eigenvectors / np.sqrt(eigenvalues)) @ eigenvectors.T
    return 0.5 * (result + result.T)


def svd(m: npt.ArrayLike) -> SvdResult:
    """
    Thin SVD with deterministic signs.

    Each left singular vector is flipped so that its largest-magnitude entry is
    positive; the paired right vector is flipped with it.
    """
    matrix = as_matrix(m)
    try:
        u, sigma, vt = np.linalg.svd(matrix, full_matrices=False)
    except np.linalg.LinAlgError as e:
        raise ConvergenceError(f"SVD did not converge for a {matrix.shape} matrix: {e}") from e

    pivot = np.argmax(np.abs(u), axis=0)
    signs = np.sign(u[pivot, np.arange(u.shape[1])])
    signs[signs == 0] = 1.0
    return SvdResult(u=u * signs, sigma=sigma, vt=vt * signs[:, None])


def pinv(m: npt.ArrayLike) -> Matrix:
    """Moore-Penrose pseudo-inverse with cutoff max(rows, cols) * sigma_max * 1e-12"""
    matrix = as_matrix(m)
    decomposition = svd(matrix)
    if decomposition.sigma.size == 0 or decomposition.sigma[0] == 0:
        return np.zeros(matrix.T.shape)
    cutoff = max(matrix.shape) * decomposition.sigma[0] * PINV_CUTOFF_FACTOR
    keep = decomposition.sigma > cutoff
    inverse_sigma = np.zeros_like(decomposition.sigma)
    inverse_sigma[keep] = 1.0 / decomposition.sigma[keep]
    return (decomposition.vt.T * inverse_sigma) @ decomposition.u.T
