"""Dense linear-algebra kernels.

Thin, contract-checked wrappers around LAPACK (through numpy/scipy). Every
function is pure; inputs are never modified.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import BadRankError, NonFiniteError, NonSquareError, UnstableError

EPS = np.finfo(float).eps


class SvdTriple(NamedTuple):
    U: np.ndarray
    S: np.ndarray
    V: np.ndarray


def as_matrix(M, name="matrix") -> np.ndarray:
    """Return ``M`` as a finite 2-D float array (1-D input becomes a row)."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NonFiniteError(f"{name} contains NaN or Inf")
    return M


def _square(M, name="matrix") -> np.ndarray:
    M = as_matrix(M, name)
    if M.shape[0] != M.shape[1]:
        raise NonSquareError(f"{name} must be square, got shape {M.shape}")
    return M


def svd(M) -> SvdTriple:
    """Thin SVD with ``M = U @ diag(S) @ V.T``.

    Singular vector signs are whatever LAPACK returns; nothing downstream
    depends on them.
    """
    M = as_matrix(M)
    U, S, Vt = np.linalg.svd(M, full_matrices=False)
    return SvdTriple(U, S, Vt.T)


def best_rank_n(M, n: int) -> tuple[np.ndarray, SvdTriple]:
    """Best rank-``n`` approximation of ``M`` in spectral norm.

    Returns the truncated matrix and the top-``n`` singular triplets.
    """
    M = as_matrix(M)
    if not 1 <= n <= min(M.shape):
        raise BadRankError(f"rank {n} out of range for shape {M.shape}")
    U, S, V = svd(M)
    U1, S1, V1 = U[:, :n], S[:n], V[:, :n]
    L = (U1 * S1) @ V1.T
    return L, SvdTriple(U1, S1, V1)


def pinv(M) -> np.ndarray:
    """Moore-Penrose pseudoinverse.

    Singular values at or below ``max(rows, cols) * eps * sigma_max`` are
    treated as zero.
    """
    M = as_matrix(M)
    U, S, V = svd(M)
    if S.size == 0 or S[0] == 0.0:
        return np.zeros(M.shape[::-1])
    tol = max(M.shape) * EPS * S[0]
    keep = S > tol
    return (V[:, keep] / S[keep]) @ U[:, keep].T


def numerical_rank(M) -> int:
    S = svd(M).S
    if S.size == 0 or S[0] == 0.0:
        return 0
    return int(np.sum(S > max(np.shape(M)) * EPS * S[0]))


def sort_spectrum(values) -> np.ndarray:
    """Sort complex values by descending real part, then descending imaginary part."""
    values = np.asarray(values, dtype=complex).ravel()
    order = np.lexsort((-values.imag, -values.real))
    return values[order]


def eig(M) -> np.ndarray:
    """Eigenvalues of a square matrix with multiplicity, deterministically sorted."""
    M = _square(M)
    return sort_spectrum(np.linalg.eigvals(M))


def spectral_radius(M) -> float:
    M = _square(M)
    return float(np.max(np.abs(np.linalg.eigvals(M))))


def expm(M) -> np.ndarray:
    """Matrix exponential (scaling and squaring with a Pade core)."""
    return scipy.linalg.expm(_square(M))


def dlyap(A, W) -> np.ndarray:
    """Solve ``A X A^T - X + W = 0`` for stable ``A``.

    Raises
    ------
    UnstableError
        If ``spr(A) >= 1 - 1e-9``; the series defining ``X`` diverges.
    """
    A = _square(A, "A")
    W = _square(W, "W")
    if W.shape != A.shape:
        raise ValueError(f"W shape {W.shape} does not match A shape {A.shape}")
    rho = spectral_radius(A)
    if rho >= 1.0 - 1e-9:
        raise UnstableError(f"dlyap needs spr(A) < 1, got {rho:.12g}")
    X = scipy.linalg.solve_discrete_lyapunov(A, W)
    return 0.5 * (X + X.T)
