"""Least-squares estimation of Markov parameters from input/output data."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from . import numerics
from .errors import RankDeficientError, TooShortError
from .lti import MarkovParams
from .simulate import SingleTrajectory, TrajectoryBatch


@dataclass(frozen=True)
class RegressionData:
    """Least-squares data.

    ``setting == "single"``: ``Y`` is ``(Tbar, m)`` and ``U`` is ``(Tbar, K*p)``
    with row ``k`` holding ``(u_k, u_{k-1}, ..., u_{k-K+1})``.
    ``setting == "multi"``: ``Y`` is ``(m, N*K)`` and ``U`` is ``(K*p, N*K)``,
    one block upper-triangular Toeplitz slab per trajectory.
    """

    Y: np.ndarray
    U: np.ndarray
    setting: str
    K: int
    p: int
    m: int

    @property
    def samples(self) -> int:
        return self.Y.shape[0] if self.setting == "single" else self.Y.shape[1]


def assemble_single(traj: SingleTrajectory, K: int) -> RegressionData:
    T, p = traj.u.shape
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    if T < K:
        raise TooShortError(f"trajectory length {T} is shorter than the horizon K={K}")
    # windows[j] = u[j:j+K], oldest first; reverse for most-recent-first.
    windows = sliding_window_view(traj.u, K, axis=0)  # (Tbar, p, K)
    U = windows[:, :, ::-1].transpose(0, 2, 1).reshape(T - K + 1, K * p)
    Y = traj.y[K - 1:]
    return RegressionData(np.ascontiguousarray(Y), np.ascontiguousarray(U), "single", K, p, traj.y.shape[1])


def _check_rank(U, needed, what):
    rank = numerics.numerical_rank(U)
    if rank < needed:
        raise RankDeficientError(f"{what} has numerical rank {rank} < {needed}; insufficient excitation")


def estimate_single(traj: SingleTrajectory, K: int) -> MarkovParams:
    """``G_hat = (pinv(U) Y)^T`` from one trajectory."""
    data = assemble_single(traj, K)
    Kp = K * data.p
    if data.samples < Kp:
        raise RankDeficientError(f"Tbar={data.samples} < K*p={Kp}; U^T U is singular")
    _check_rank(data.U, Kp, "single-trajectory regressor")
    return MarkovParams((numerics.pinv(data.U) @ data.Y).T, data.p)


def toeplitz_inputs(u) -> np.ndarray:
    """Block upper-triangular Toeplitz matrix of one length-``K`` input sequence.

    ``u`` is ``(K, p)``; block ``(r, c)`` of the ``(K*p, K)`` result is
    ``u[c - r]`` for ``c >= r`` and zero otherwise.
    """
    K, p = u.shape
    out = np.zeros((K * p, K))
    for r in range(K):
        out[r * p:(r + 1) * p, r:] = u[:K - r].T
    return out


def assemble_multi(batch: TrajectoryBatch) -> RegressionData:
    N, K, p = batch.u.shape
    m = batch.y.shape[2]
    if N < 1:
        raise ValueError("need at least one trajectory")
    U = np.hstack([toeplitz_inputs(batch.u[i]) for i in range(N)])
    Y = batch.y.transpose(2, 0, 1).reshape(m, N * K)
    return RegressionData(Y, U, "multi", K, p, m)


def estimate_multi(batch: TrajectoryBatch) -> MarkovParams:
    """``G_hat = Y pinv(U)`` from ``N`` independent trajectories."""
    data = assemble_multi(batch)
    _check_rank(data.U, data.K * data.p, "multi-trajectory regressor")
    return MarkovParams(data.Y @ numerics.pinv(data.U), data.p)


def write_markov_csv(path, g: MarkovParams) -> None:
    """Write ``G`` as ``m`` rows of ``K*p`` values (no header)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        for row in g.G:
            writer.writerow([f"{x:.17g}" for x in row])


def read_markov_csv(path, p: int) -> MarkovParams:
    with open(path, newline="") as fh:
        rows = [[float(x) for x in row] for row in csv.reader(fh) if row]
    return MarkovParams(np.array(rows), p)
