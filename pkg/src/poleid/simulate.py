"""Input/output data generation under Gaussian input and noise."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .lti import StateSpace

# Stream identifiers for the per-trajectory generators.
INPUT, PROCESS, MEASUREMENT = 0, 1, 2


@dataclass(frozen=True)
class NoiseSpec:
    sigma_u: float = 1.0
    sigma_w: float = 1e-2
    sigma_v: float = 1e-2
    base_seed: int = 0

    def __post_init__(self):
        if self.sigma_u < 0 or self.sigma_w < 0 or self.sigma_v < 0:
            raise ValueError("noise standard deviations must be nonnegative")


@dataclass(frozen=True)
class SingleTrajectory:
    u: np.ndarray  # (T, p)
    y: np.ndarray  # (T, m)

    @property
    def T(self) -> int:
        return self.u.shape[0]


@dataclass(frozen=True)
class TrajectoryBatch:
    u: np.ndarray  # (N, K, p)
    y: np.ndarray  # (N, K, m)

    @property
    def N(self) -> int:
        return self.u.shape[0]

    @property
    def K(self) -> int:
        return self.u.shape[1]

    def __len__(self):
        return self.N

    def __getitem__(self, i) -> SingleTrajectory:
        return SingleTrajectory(self.u[i], self.y[i])

    @classmethod
    def from_trajectories(cls, trajs) -> "TrajectoryBatch":
        trajs = list(trajs)
        if len({t.T for t in trajs}) > 1:
            raise ValueError("all trajectories in a batch must have the same length")
        return cls(np.stack([t.u for t in trajs]), np.stack([t.y for t in trajs]))


def derive_seed(seed: int, *key: int) -> int:
    """Hash ``(seed, *key)`` into an independent 64-bit seed."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, np.uint64)[0])


def _stream(seed: int, role: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(role,))))


def propagate(ss: StateSpace, u, w=None, v=None) -> np.ndarray:
    """Run the state recursion from ``x0 = 0``.

    Arrays carry time on the second-to-last axis: ``u`` is ``(..., T, p)``,
    ``w`` is ``(..., T, n)`` and ``v`` is ``(..., T, m)``. Returns ``y`` of
    shape ``(..., T, m)``.
    """
    u = np.asarray(u, dtype=float)
    T = u.shape[-2]
    lead = u.shape[:-2]
    x = np.zeros(lead + (ss.n,))
    y = np.empty(lead + (T, ss.m))
    At, Bt, Ct, Dt = ss.A.T, ss.B.T, ss.C.T, ss.D.T
    for k in range(T):
        uk = u[..., k, :]
        y[..., k, :] = x @ Ct + uk @ Dt
        x = x @ At + uk @ Bt
        if w is not None:
            x = x + w[..., k, :]
    if v is not None:
        y += v
    return y


def _draw(ss: StateSpace, noise: NoiseSpec, T: int, seed: int):
    u = _stream(seed, INPUT).standard_normal((T, ss.p)) * noise.sigma_u
    w = _stream(seed, PROCESS).standard_normal((T, ss.n)) * noise.sigma_w
    v = _stream(seed, MEASUREMENT).standard_normal((T, ss.m)) * noise.sigma_v
    return u, w, v


def simulate_single(ss: StateSpace, noise: NoiseSpec, T: int, seed: int | None = None,
                    inputs=None) -> SingleTrajectory:
    """Simulate one trajectory of length ``T`` from ``x0 = 0``.

    Input, process noise and measurement noise come from three separate
    streams keyed on ``seed`` (``noise.base_seed`` when omitted), so a longer
    run with the same seed extends a shorter one. ``inputs`` replaces the
    random input sequence when given.
    """
    if T < 1:
        raise ValueError(f"trajectory length must be >= 1, got {T}")
    seed = noise.base_seed if seed is None else seed
    u, w, v = _draw(ss, noise, T, seed)
    if inputs is not None:
        u = np.asarray(inputs, dtype=float).reshape(T, ss.p)
    y = propagate(ss, u[None], w[None], v[None])[0]
    return SingleTrajectory(u, y)


def simulate_batch(ss: StateSpace, noise: NoiseSpec, K: int, N: int,
                   seed: int | None = None) -> TrajectoryBatch:
    """``N`` independent length-``K`` trajectories; trajectory ``i`` is seeded
    with ``derive_seed(seed, i)``."""
    if K < 1 or N < 1:
        raise ValueError(f"need K >= 1 and N >= 1, got K={K}, N={N}")
    seed = noise.base_seed if seed is None else seed
    draws = [_draw(ss, noise, K, derive_seed(seed, i)) for i in range(N)]
    u, w, v = (np.stack(parts) for parts in zip(*draws))
    return TrajectoryBatch(u, propagate(ss, u, w, v))


def write_trajectories_csv(path, data) -> None:
    """Write a trajectory or batch as ``traj_id,k,u_1..u_p,y_1..y_m``."""
    if isinstance(data, SingleTrajectory):
        data = TrajectoryBatch(data.u[None], data.y[None])
    N, K, p = data.u.shape
    m = data.y.shape[2]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["traj_id", "k"] + [f"u_{j + 1}" for j in range(p)] + [f"y_{j + 1}" for j in range(m)])
        for i in range(N):
            for k in range(K):
                writer.writerow([i, k] + [f"{x:.17g}" for x in data.u[i, k]] + [f"{x:.17g}" for x in data.y[i, k]])


def read_trajectories_csv(path) -> list[SingleTrajectory]:
    """Read trajectories written by :func:`write_trajectories_csv`, in ``traj_id`` order."""
    with open(Path(path), newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[:2] != ["traj_id", "k"]:
            raise ValueError(f"{path}: header must start with traj_id,k")
        u_cols = [j for j, h in enumerate(header) if h.startswith("u_")]
        y_cols = [j for j, h in enumerate(header) if h.startswith("y_")]
        rows: dict[int, list] = {}
        for row in reader:
            if not row:
                continue
            rows.setdefault(int(row[0]), []).append(row)
    trajs = []
    for tid in sorted(rows):
        recs = sorted(rows[tid], key=lambda r: int(r[1]))
        u = np.array([[float(r[j]) for j in u_cols] for r in recs])
        y = np.array([[float(r[j]) for j in y_cols] for r in recs])
        trajs.append(SingleTrajectory(u, y))
    return trajs
