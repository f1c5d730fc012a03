"""Ho-Kalman realization from (estimated) Markov parameters."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import numerics
from .errors import BadPartitionError, NearSingularWarning
from .lti import HankelSet, MarkovParams, StateSpace, hankel_from_markov, markov_matrix

NEAR_SINGULAR_RATIO = 1e-10


@dataclass(frozen=True)
class Realization:
    """Balanced realization plus the Hankel diagnostics it was built from.

    ``Ohat @ Qhat`` reproduces the rank-``n`` truncation of the Hankel
    matrix with the right-most block column removed; ``Qhat`` therefore has
    ``K2`` block columns.
    """

    Ahat: np.ndarray
    Bhat: np.ndarray
    Chat: np.ndarray
    Dhat: np.ndarray
    Ohat: np.ndarray
    Qhat: np.ndarray
    sigma: np.ndarray
    sigma_np1: float
    near_singular: bool
    hankel: HankelSet = field(repr=False)

    @property
    def n(self) -> int:
        return self.Ahat.shape[0]

    def poles(self) -> np.ndarray:
        return numerics.eig(self.Ahat)

    def state_space(self) -> StateSpace:
        return StateSpace(self.Ahat, self.Bhat, self.Chat, self.Dhat)

    def to_dict(self) -> dict:
        return self.state_space().to_dict()


def ho_kalman(g: MarkovParams, n: int, K1: int, K2: int, warn: bool = True) -> Realization:
    """Recover ``(A, B, C, D)`` of order ``n`` from ``g``.

    Parameters
    ----------
    g : MarkovParams
        ``[D, CB, CAB, ...]`` with ``K = K1 + K2 + 1`` blocks.
    n : int
        System order, assumed known.
    K1, K2 : int
        Block rows and block columns (minus one) of the Hankel matrix;
        both must be at least ``n``.
    warn : bool
        Emit :class:`NearSingularWarning` when the ``n``-th retained singular
        value is below ``1e-10`` times the largest. The realization is
        returned with ``near_singular`` set either way.
    """
    if K1 < n or K2 < n:
        raise BadPartitionError(f"need K1, K2 >= n={n}, got K1={K1}, K2={K2}")
    hs = hankel_from_markov(g, K1, K2, n)
    U1, S1, V1 = hs.svd
    full_s = numerics.svd(hs.Hminus).S
    sigma_np1 = float(full_s[n]) if full_s.size > n else 0.0

    near_singular = bool(S1[-1] <= NEAR_SINGULAR_RATIO * S1[0])
    if near_singular and warn:
        warnings.warn(
            f"sigma_n={S1[-1]:.3g} is below {NEAR_SINGULAR_RATIO:g} * sigma_1={S1[0]:.3g}",
            NearSingularWarning,
            stacklevel=2,
        )

    root = np.sqrt(S1)
    Ohat = U1 * root
    Qhat = root[:, None] * V1.T
    Ahat = numerics.pinv(Ohat) @ hs.Hplus @ numerics.pinv(Qhat)
    p, m = g.p, g.m
    return Realization(
        Ahat=Ahat,
        Bhat=Qhat[:, :p],
        Chat=Ohat[:m, :],
        Dhat=np.array(g.block(0)),
        Ohat=Ohat,
        Qhat=Qhat,
        sigma=S1.copy(),
        sigma_np1=sigma_np1,
        near_singular=near_singular,
        hankel=hs,
    )


def realization_markov(r: Realization, K: int) -> MarkovParams:
    """Markov parameters of a realization, for round-trip comparison."""
    return markov_matrix(r.state_space(), K)
