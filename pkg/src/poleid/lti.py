"""Discrete-time LTI models and the block matrices built from them."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import numerics
from .errors import (
    BadHorizonError,
    BadMassError,
    BadPartitionError,
    BadRankError,
    SizeMismatchError,
)

STABILITY_TOL = 1e-9


def _frozen(M, name):
    M = numerics.as_matrix(M, name).copy()
    M.flags.writeable = False
    return M


@dataclass(frozen=True)
class StateSpace:
    """``x[k+1] = A x[k] + B u[k]``, ``y[k] = C x[k] + D u[k]``.

    ``D`` defaults to zeros. Matrices are stored read-only.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray | None = None

    def __post_init__(self):
        A = _frozen(self.A, "A")
        B = _frozen(self.B, "B")
        C = _frozen(self.C, "C")
        n = A.shape[0]
        if A.shape != (n, n):
            raise SizeMismatchError(f"A must be square, got {A.shape}")
        if B.shape[0] != n:
            raise SizeMismatchError(f"B has {B.shape[0]} rows, expected {n}")
        if C.shape[1] != n:
            raise SizeMismatchError(f"C has {C.shape[1]} columns, expected {n}")
        D = np.zeros((C.shape[0], B.shape[1])) if self.D is None else self.D
        D = _frozen(D, "D")
        if D.shape != (C.shape[0], B.shape[1]):
            raise SizeMismatchError(f"D must be {(C.shape[0], B.shape[1])}, got {D.shape}")
        for name, M in zip("ABCD", (A, B, C, D)):
            object.__setattr__(self, name, M)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def p(self) -> int:
        return self.B.shape[1]

    @property
    def m(self) -> int:
        return self.C.shape[0]

    @property
    def spectral_radius(self) -> float:
        return numerics.spectral_radius(self.A)

    @property
    def stability(self) -> str:
        """One of ``"stable"``, ``"marginal"`` or ``"unstable"``."""
        rho = self.spectral_radius
        if rho < 1.0 - STABILITY_TOL:
            return "stable"
        if rho <= 1.0 + STABILITY_TOL:
            return "marginal"
        return "unstable"

    def poles(self) -> np.ndarray:
        return numerics.eig(self.A)

    def to_dict(self) -> dict:
        return {k: getattr(self, k).tolist() for k in "ABCD"}

    @classmethod
    def from_dict(cls, d: dict) -> "StateSpace":
        unknown = set(d) - set("ABCD")
        if unknown:
            raise KeyError(f"unknown state-space keys: {sorted(unknown)}")
        return cls(d["A"], d["B"], d["C"], d.get("D"))


@dataclass(frozen=True)
class SpringDamperParams:
    """Two masses in series between two walls.

    Spring constants may be negative (active elements that destabilise).
    """

    m1: float = 1.0
    m2: float = 1.0
    k1: float = 0.5
    k2: float = 0.7
    k3: float = 0.6
    c1: float = 5.0
    c2: float = 5.0
    Ts: float = 0.1

    def __post_init__(self):
        if self.m1 <= 0 or self.m2 <= 0:
            raise BadMassError(f"masses must be positive, got m1={self.m1}, m2={self.m2}")
        if self.Ts <= 0:
            raise ValueError(f"sampling period must be positive, got {self.Ts}")


@dataclass(frozen=True)
class MarkovParams:
    """The first ``K`` Markov parameters ``[D, CB, CAB, ..., CA^(K-2)B]``."""

    G: np.ndarray
    p: int

    def __post_init__(self):
        G = _frozen(self.G, "G")
        if G.shape[1] % self.p:
            raise SizeMismatchError(f"G width {G.shape[1]} is not a multiple of p={self.p}")
        object.__setattr__(self, "G", G)

    @property
    def K(self) -> int:
        return self.G.shape[1] // self.p

    @property
    def m(self) -> int:
        return self.G.shape[0]

    def block(self, k: int) -> np.ndarray:
        return self.G[:, k * self.p:(k + 1) * self.p]


@dataclass(frozen=True)
class HankelSet:
    H: np.ndarray
    Hplus: np.ndarray
    Hminus: np.ndarray
    L: np.ndarray
    K1: int
    K2: int
    n: int
    svd: numerics.SvdTriple = field(repr=False)


@dataclass(frozen=True)
class ExtendedMatrices:
    O: np.ndarray
    Q: np.ndarray
    F: np.ndarray


def markov_matrix(ss: StateSpace, K: int) -> MarkovParams:
    if K < 2:
        raise BadHorizonError(f"horizon K must be >= 2, got {K}")
    blocks = [ss.D]
    CAk = ss.C
    for _ in range(1, K):
        blocks.append(CAk @ ss.B)
        CAk = CAk @ ss.A
    return MarkovParams(np.hstack(blocks), ss.p)


def hankel_from_markov(g: MarkovParams, K1: int, K2: int, n: int) -> HankelSet:
    """Block Hankel matrix of ``g`` and its rank-``n`` truncated left part.

    Block ``(i, j)`` of ``H`` is Markov block ``i + j + 1``; ``H`` has ``K1``
    block rows and ``K2 + 1`` block columns.
    """
    if K1 < 1 or K2 < 1 or K1 + K2 + 1 != g.K:
        raise BadPartitionError(f"need K1 + K2 + 1 = K with K1, K2 >= 1; got K1={K1}, K2={K2}, K={g.K}")
    m, p = g.m, g.p
    if not 1 <= n <= min(K1 * m, K2 * p):
        raise BadRankError(f"order n={n} out of range for K1*m={K1 * m}, K2*p={K2 * p}")
    H = np.block([[g.block(i + j + 1) for j in range(K2 + 1)] for i in range(K1)])
    Hplus = H[:, p:]
    Hminus = H[:, :-p]
    L, triple = numerics.best_rank_n(Hminus, n)
    return HankelSet(H, Hplus, Hminus, L, K1, K2, n, triple)


def extended_matrices(ss: StateSpace, K1: int, K2: int, K: int) -> ExtendedMatrices:
    """Observability ``O`` (K1 block rows), controllability ``Q`` (K2+1 block
    columns) and the noise-to-output matrix ``F = [0, C, CA, ..., CA^(K-2)]``."""
    if K1 < 1 or K2 < 1:
        raise BadPartitionError(f"K1, K2 must be >= 1, got {K1}, {K2}")
    if K < 2:
        raise BadHorizonError(f"horizon K must be >= 2, got {K}")
    A, B, C = ss.A, ss.B, ss.C

    def powers(count):
        P = np.eye(ss.n)
        for _ in range(count):
            yield P
            P = P @ A

    O = np.vstack([C @ P for P in powers(K1)])
    Q = np.hstack([P @ B for P in powers(K2 + 1)])
    F = np.hstack([np.zeros((ss.m, ss.n))] + [C @ P for P in powers(K - 1)])
    return ExtendedMatrices(O, Q, F)


def spring_damper_continuous(params: SpringDamperParams):
    """Continuous-time ``(Ac, Bc, Cc)`` with state ``(q1, dq1, q2, dq2)``,
    inputs ``(f1, f2)`` and outputs ``(q1, q2)``."""
    m1, m2 = params.m1, params.m2
    k1, k2, k3 = params.k1, params.k2, params.k3
    c1, c2 = params.c1, params.c2
    Ac = np.array([
        [0.0, 1.0, 0.0, 0.0],
        [-(k1 + k2) / m1, -(c1 + c2) / m1, k2 / m1, c2 / m1],
        [0.0, 0.0, 0.0, 1.0],
        [k2 / m2, c2 / m2, -(k2 + k3) / m2, -c2 / m2],
    ])
    Bc = np.array([
        [0.0, 0.0],
        [1.0 / m1, 0.0],
        [0.0, 0.0],
        [0.0, 1.0 / m2],
    ])
    Cc = np.array([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
    ])
    return Ac, Bc, Cc


def zoh_discretize(Ac, Bc, Cc, Ts: float) -> StateSpace:
    """Zero-order-hold discretization with zero feedthrough.

    ``Bd`` is read off the top-right block of ``expm([[Ac, Bc], [0, 0]] * Ts)``.
    """
    if Ts <= 0:
        raise ValueError(f"sampling period must be positive, got {Ts}")
    Ac = numerics.as_matrix(Ac, "Ac")
    Bc = numerics.as_matrix(Bc, "Bc")
    Cc = numerics.as_matrix(Cc, "Cc")
    n, p = Bc.shape
    M = np.zeros((n + p, n + p))
    M[:n, :n] = Ac
    M[:n, n:] = Bc
    E = numerics.expm(M * Ts)
    return StateSpace(E[:n, :n], E[:n, n:], Cc)
