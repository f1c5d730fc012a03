"""Distances between eigenvalue sets and the Elsner perturbation bound."""

from __future__ import annotations

import numpy as np

from . import numerics
from .errors import SizeMismatchError


def _pair(a, b):
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.size != b.size or a.size == 0:
        raise SizeMismatchError(f"spectra must have equal nonzero size, got {a.size} and {b.size}")
    return a, b


def spectrum_variation(a, b) -> float:
    """Largest distance from a point of ``b`` to its nearest point of ``a``."""
    a, b = _pair(a, b)
    dist = np.abs(a[:, None] - b[None, :])
    return float(dist.min(axis=0).max())


def hausdorff(a, b) -> float:
    """Hausdorff distance between two equal-size eigenvalue multisets.

    This is the max-min distance, not an optimal one-to-one matching.
    """
    return max(spectrum_variation(a, b), spectrum_variation(b, a))


def pole_distance(A, B) -> float:
    """Hausdorff distance between the spectra of two square matrices."""
    return hausdorff(numerics.eig(A), numerics.eig(B))


def elsner_bound(A, B) -> float:
    """``(||A|| + ||B||)^(1 - 1/n) * ||A - B||^(1/n)`` in spectral norm.

    Upper-bounds :func:`pole_distance` for any pair of ``n x n`` matrices.
    """
    A = np.asarray(A, dtype=float if np.isrealobj(A) else complex)
    B = np.asarray(B, dtype=float if np.isrealobj(B) else complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape != B.shape:
        raise SizeMismatchError(f"need two square matrices of equal size, got {A.shape} and {B.shape}")
    n = A.shape[0]
    total = np.linalg.norm(A, 2) + np.linalg.norm(B, 2)
    diff = np.linalg.norm(A - B, 2)
    return float(total ** (1.0 - 1.0 / n) * diff ** (1.0 / n))
