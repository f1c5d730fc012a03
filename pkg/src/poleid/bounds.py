"""Closed-form error bounds for Ho-Kalman pole estimation.

Everything here evaluates a formula; nothing is estimated from data. All
logarithms are natural logarithms.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import numerics
from .errors import (
    BadDeltaError,
    DegenerateHankelError,
    DivergingError,
    MarginalError,
    UnstableError,
)
from .ho_kalman import ho_kalman
from .lti import StateSpace, extended_matrices, hankel_from_markov, markov_matrix

# e^(pi^2/4) and its fourth power e^(pi^2).
RHO = math.exp(math.pi ** 2 / 4)
VARRHO = math.exp(math.pi ** 2)

NILPOTENT_TOL = 1e-14


def _check_delta(delta):
    if not 0.0 < delta < 1.0:
        raise BadDeltaError(f"failure probability must be in (0, 1), got {delta}")


def _is_nilpotent(A) -> bool:
    n = A.shape[0]
    scale = max(1.0, np.linalg.norm(A, 2)) ** n
    return np.linalg.norm(np.linalg.matrix_power(A, n), 2) <= NILPOTENT_TOL * scale


def phi(A, tau_max: int = 500, patience: int = 50) -> float:
    """Transient growth ``sup_tau ||A^tau|| / spr(A)^(tau/2)``.

    The supremum is scanned over ``tau = 0..tau_max``. For ``spr(A) < 1`` the
    scan stops once the ratio has fallen for ``patience`` consecutive steps.
    For ``spr(A) >= 1`` the full range is scanned and the result is only a
    lower estimate of the supremum.

    Nilpotent ``A`` has spectral radius 0: the ``tau = 0`` term is 1, zero
    powers contribute 0, and any nonzero power makes the supremum infinite.
    """
    A = numerics.as_matrix(A, "A")
    if A.shape[0] != A.shape[1]:
        raise numerics.NonSquareError(f"A must be square, got {A.shape}")
    n = A.shape[0]
    if _is_nilpotent(A):
        if not np.any(A):
            return 1.0
        return math.inf
    rho = numerics.spectral_radius(A)
    log_rho = math.log(rho)

    # Track A^tau as P * exp(log_scale) so long scans neither under- nor overflow.
    P = np.eye(n)
    log_scale = 0.0
    best = 0.0  # log of the tau = 0 ratio
    prev = 0.0
    falling = 0
    rising = False
    for tau in range(1, tau_max + 1):
        P = A @ P
        s = np.linalg.norm(P, 2)
        if s == 0.0:
            break
        P /= s
        log_scale += math.log(s)
        cur = log_scale - 0.5 * tau * log_rho
        best = max(best, cur)
        falling = falling + 1 if cur < prev else 0
        rising = cur > prev
        prev = cur
        if rho < 1.0 and falling >= patience:
            break
    else:
        if rho < 1.0 and rising:
            raise DivergingError(f"ratio still increasing at tau_max={tau_max} with spr(A)={rho:.6g}")
    return math.exp(best)


def gamma_inf(ss: StateSpace, sigma_w: float, sigma_u: float) -> np.ndarray:
    """Steady-state state covariance ``sum_i A^i (sigma_w^2 I + sigma_u^2 B B^T) A^iT``."""
    W = sigma_w ** 2 * np.eye(ss.n) + sigma_u ** 2 * ss.B @ ss.B.T
    return numerics.dlyap(ss.A, W)


def sigma_e(ss: StateSpace, K: int, phi_val: float, gamma_norm: float) -> float:
    """``Phi(A) ||C A^(K-1)|| sqrt(K ||Gamma_inf|| / (1 - spr(A)^K))``."""
    tail = np.linalg.norm(ss.C @ np.linalg.matrix_power(ss.A, K - 1), 2)
    if tail == 0.0:
        return 0.0
    rK = ss.spectral_radius ** K
    if rK >= 1.0:
        raise MarginalError(f"spr(A)^K = {rK:.6g} >= 1")
    return float(phi_val * tail * math.sqrt(K * gamma_norm / (1.0 - rK)))


def pole_bound(delta_val: float, A_norm: float, n: int) -> float:
    """``(delta + 2||A||)^(1 - 1/n) * delta^(1/n)``."""
    if delta_val < 0 or n < 1:
        raise ValueError(f"need delta >= 0 and n >= 1, got {delta_val}, {n}")
    return float((delta_val + 2.0 * A_norm) ** (1.0 - 1.0 / n) * delta_val ** (1.0 / n))


def c1(K: int, p: int, m: int, delta: float) -> float:
    _check_delta(delta)
    return 8.0 * math.sqrt(2.0 * K * (K + 1) * (p + m) * math.log(27.0 * K / delta))


def c2(K: int, p: int, n: int, delta: float, F_norm: float) -> float:
    _check_delta(delta)
    poly = K ** 3 / 3.0 + K ** 2 / 2.0 + K / 6.0
    return 16.0 * F_norm * math.sqrt(poly * 2.0 * (p + n) * math.log(27.0 * K / delta))


def min_trajectories(p: int, n: int, m: int, K: int, delta: float) -> int:
    """Smallest ``N`` satisfying ``N >= 8pK + 4(p+n+m+4) log(3K/delta)``."""
    _check_delta(delta)
    return math.ceil(8 * p * K + 4 * (p + n + m + 4) * math.log(3.0 * K / delta))


def _decay_exponent(n, m, p, K1, K2):
    return max(
        ((n - 1) // (2 * m)) / math.log(2 * m * K1),
        ((n - 1) // (2 * p)) / math.log(2 * p * K2),
    )


def entry_product(B, C) -> float:
    """Largest absolute entry of ``B`` times that of ``C``."""
    return float(np.max(np.abs(B)) * np.max(np.abs(C)))


def sigma_n_upper(n: int, m: int, p: int, K1: int, K2: int, delta_bar: float) -> float:
    """Upper bound on the ``n``-th singular value of the truncated Hankel matrix.

    Valid for stable or marginally stable ``A`` with distinct real
    eigenvalues; checking that is the caller's job.
    """
    K = K1 + K2 + 1
    return float(2.0 * delta_bar * n * K * math.sqrt(p * m) * RHO ** (-_decay_exponent(n, m, p, K1, K2)))


def sample_complexity(mode: str, n: int, m: int, p: int, K: int, K1: int, K2: int,
                      q: int | None = None) -> float:
    """Order-of-magnitude sample requirement for constant pole error, unit constant.

    ``mode="single"`` gives the ``Tbar`` scale, ``mode="multi"`` the ``N`` scale.
    """
    q = p + m + n if q is None else q
    growth = VARRHO ** _decay_exponent(n, m, p, K1, K2)
    if mode == "single":
        return q / (n * p * m) * growth
    if mode == "multi":
        return n * K ** 3 / p * growth
    raise ValueError(f"mode must be 'single' or 'multi', got {mode!r}")


@dataclass(frozen=True)
class NormBounds:
    O: float
    Q: float
    H: float
    F: float
    valid: bool


def norm_bounds(ss: StateSpace, K1: int, K2: int, K: int) -> NormBounds:
    """Entry-wise bounds on ``||O||``, ``||Q||``, ``||H||``, ``||F||``.

    ``valid`` is False when ``spr(A) > 1 + 1e-9``. The bounds rely on
    ``||A^k|| <= 1``, which stability alone does not guarantee for non-normal
    ``A``.
    """
    n, p, m = ss.n, ss.p, ss.m
    cbar = float(np.max(np.abs(ss.C)))
    bbar = float(np.max(np.abs(ss.B)))
    return NormBounds(
        O=cbar * math.sqrt(K1 * m * n),
        Q=bbar * math.sqrt((K2 + 1) * p * n),
        H=0.5 * bbar * cbar * n * math.sqrt(p * m) * K,
        F=cbar * math.sqrt(m * n * K),
        valid=ss.spectral_radius <= 1.0 + 1e-9,
    )


@dataclass(frozen=True)
class HankelPerturbation:
    G_err: float
    H_err: float
    Hplus_err: float
    Hminus_err: float
    L_err: float
    H_bound: float
    L_bound: float

    @property
    def holds(self) -> bool:
        return (max(self.Hplus_err, self.Hminus_err) <= self.H_err
                and self.H_err <= self.H_bound
                and self.L_err <= self.L_bound)


def hankel_perturbation(g, g_hat, K1: int, K2: int, n: int) -> HankelPerturbation:
    """Measure how a Markov-parameter error propagates to the Hankel matrices.

    The ``L_bound`` inequality assumes ``g`` comes from an order-``n`` system
    (so its truncated Hankel matrix is exactly rank ``n``).
    """
    hs = hankel_from_markov(g, K1, K2, n)
    hh = hankel_from_markov(g_hat, K1, K2, n)
    nrm = lambda M: float(np.linalg.norm(M, 2))  # noqa: E731
    G_err = nrm(g.G - g_hat.G)
    Hminus_err = nrm(hs.Hminus - hh.Hminus)
    return HankelPerturbation(
        G_err=G_err,
        H_err=nrm(hs.H - hh.H),
        Hplus_err=nrm(hs.Hplus - hh.Hplus),
        Hminus_err=Hminus_err,
        L_err=nrm(hs.L - hh.L),
        H_bound=math.sqrt(min(K1, K2 + 1)) * G_err,
        L_bound=2.0 * Hminus_err,
    )


def realization_perturbation_bound(L_err: float, sigma_n_L: float, Hplus_norm: float,
                                   Hplus_err: float, n: int) -> float:
    """Frobenius bound on the aligned state-matrix error of two realizations.

    Only meaningful when ``L_err <= sigma_n_L / 2``.
    """
    if sigma_n_L <= 0:
        raise DegenerateHankelError("sigma_n(L) must be positive")
    return 9.0 * math.sqrt(n) / sigma_n_L * (L_err / sigma_n_L * Hplus_norm + Hplus_err)


@dataclass(frozen=True)
class BoundInputs:
    ss: StateSpace
    K: int
    K1: int
    K2: int
    sigma_u: float = 1.0
    sigma_w: float = 1e-2
    sigma_v: float = 1e-2
    delta: float = 0.05
    Tbar: int = 2986
    N: int = 200
    calibration_C: float = 1.0

    @property
    def n(self) -> int:
        return self.ss.n

    @property
    def p(self) -> int:
        return self.ss.p

    @property
    def m(self) -> int:
        return self.ss.m

    @property
    def q(self) -> int:
        return self.p + self.m + self.n

    @property
    def Tbar0(self) -> float:
        kq = self.K * self.q
        return kq * math.log(kq) ** 2


def delta_single(inputs: BoundInputs, H_norm: float, sigma_n_Hminus: float) -> float:
    """Single-trajectory state-matrix error scale, ``C sqrt(nK) log(Tbar q) ||H|| / sigma_n^2 * sqrt(Tbar0/Tbar)``."""
    if sigma_n_Hminus <= 0:
        raise DegenerateHankelError("sigma_n(H-) must be positive")
    if inputs.Tbar < 2 or inputs.q < 3:
        raise ValueError(f"need Tbar >= 2 and q >= 3, got Tbar={inputs.Tbar}, q={inputs.q}")
    return float(
        inputs.calibration_C * math.sqrt(inputs.n * inputs.K) * math.log(inputs.Tbar * inputs.q)
        * H_norm / sigma_n_Hminus ** 2 * math.sqrt(inputs.Tbar0 / inputs.Tbar)
    )


def delta_multi(inputs: BoundInputs, Hplus_norm: float, sigma_n_Hminus: float,
                c1_val: float, c2_val: float) -> float:
    """Multi-trajectory state-matrix error scale, decaying as ``N^(-1/2)``."""
    if sigma_n_Hminus <= 0:
        raise DegenerateHankelError("sigma_n(H-) must be positive")
    if inputs.N < 1:
        raise ValueError(f"need N >= 1, got {inputs.N}")
    s = sigma_n_Hminus
    return float(
        9.0 * math.sqrt(inputs.n) / s * (Hplus_norm / s + 2.0)
        * math.sqrt(min(inputs.K1, inputs.K2 + 1))
        * (inputs.sigma_v * c1_val + inputs.sigma_w * c2_val) / inputs.sigma_u
        * math.sqrt(1.0 / inputs.N)
    )


@dataclass
class BoundReport:
    inputs: dict
    phi: float | None
    gamma_inf_norm: float | None
    sigma_e: float | None
    sigma_n_Hminus: float
    H_norm: float
    Hplus_norm: float
    F_norm: float
    A_bar_norm: float
    delta_single: float | None
    delta_multi: float | None
    C1: float
    C2: float
    pole_bound_single: float | None
    pole_bound_multi: float | None
    min_trajectories: int
    sigma_n_upper: float
    sample_complexity_single: float
    sample_complexity_multi: float
    norm_bounds: dict
    assumptions_ok: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["assumptions_ok"] = [{"name": k, "satisfied": v} for k, v in self.assumptions_ok]
        return d


class TruthQuantities:
    """Hankel quantities of the true system, shared by every bound evaluation."""

    def __init__(self, ss: StateSpace, K: int, K1: int, K2: int):
        self.G = markov_matrix(ss, K)
        self.hankel = hankel_from_markov(self.G, K1, K2, ss.n)
        self.sigma_n_Hminus = float(self.hankel.svd.S[-1])
        self.H_norm = float(np.linalg.norm(self.hankel.H, 2))
        self.Hplus_norm = float(np.linalg.norm(self.hankel.Hplus, 2))
        self.F_norm = float(np.linalg.norm(extended_matrices(ss, K1, K2, K).F, 2))
        self.realization = ho_kalman(self.G, ss.n, K1, K2, warn=False)
        self.A_bar_norm = float(np.linalg.norm(self.realization.Ahat, 2))


def bound_report(inputs: BoundInputs, truth: TruthQuantities | None = None) -> BoundReport:
    """Evaluate every bound for ``inputs`` and flag the unmet preconditions.

    Quantities whose definition needs ``spr(A) < 1`` are reported as ``None``
    for marginal or unstable systems instead of being extrapolated.
    """
    ss, K, K1, K2, n = inputs.ss, inputs.K, inputs.K1, inputs.K2, inputs.n
    truth = truth or TruthQuantities(ss, K, K1, K2)
    rho = ss.spectral_radius
    notes = ["natural logarithm throughout", f"calibration constant C = {inputs.calibration_C:g}"]
    checks: list[tuple[str, bool]] = []

    eigs = numerics.eig(ss.A)
    ext = extended_matrices(ss, max(K1, n), max(K2, n), K)
    minimal = (numerics.numerical_rank(ext.O) == n and numerics.numerical_rank(ext.Q) == n)
    checks += [
        ("minimal (observable and controllable)", bool(minimal)),
        ("sigma_w > 0 and sigma_v > 0", inputs.sigma_w > 0 and inputs.sigma_v > 0),
        ("sigma_u == 1", inputs.sigma_u == 1.0),
        ("spr(A) < 1", rho < 1.0 - 1e-9),
        ("spr(A)^K <= 0.99", rho ** K <= 0.99),
        ("stable or marginally stable", rho <= 1.0 + 1e-9),
        ("distinct real eigenvalues",
         bool(np.all(np.abs(eigs.imag) <= 1e-12) and np.all(np.abs(np.diff(np.sort(eigs.real))) > 1e-12))),
        ("sigma_n(H-) > 0", truth.sigma_n_Hminus > 0),
        ("Tbar >= 2 and q >= 3", inputs.Tbar >= 2 and inputs.q >= 3),
        ("0 < delta < 1", 0 < inputs.delta < 1),
    ]

    phi_val = gamma_norm = se = None
    try:
        phi_val = phi(ss.A)
    except DivergingError as exc:
        notes.append(f"Phi(A) unavailable: {exc}")
    if rho >= 1.0:
        notes.append("Phi(A) is a lower estimate (spr(A) >= 1)")
    try:
        gamma_norm = float(np.linalg.norm(gamma_inf(ss, inputs.sigma_w, inputs.sigma_u), 2))
    except UnstableError as exc:
        notes.append(f"Gamma_inf unavailable: {exc}")
    if phi_val is not None and gamma_norm is not None:
        try:
            se = sigma_e(ss, K, phi_val, gamma_norm)
        except MarginalError as exc:
            notes.append(f"sigma_e unavailable: {exc}")

    c1_val = c1(K, inputs.p, inputs.m, inputs.delta)
    c2_val = c2(K, inputs.p, n, inputs.delta, truth.F_norm)
    n_min = min_trajectories(inputs.p, n, inputs.m, K, inputs.delta)
    checks.append(("N >= min_trajectories", inputs.N >= n_min))

    d_single = d_multi = pb_single = pb_multi = None
    if truth.sigma_n_Hminus > 0:
        if inputs.Tbar >= 2 and inputs.q >= 3:
            d_single = delta_single(inputs, truth.H_norm, truth.sigma_n_Hminus)
            pb_single = pole_bound(d_single, truth.A_bar_norm, n)
        d_multi = delta_multi(inputs, truth.Hplus_norm, truth.sigma_n_Hminus, c1_val, c2_val)
        pb_multi = pole_bound(d_multi, truth.A_bar_norm, n)

    nb = norm_bounds(ss, K1, K2, K)
    return BoundReport(
        inputs={
            "K": K, "K1": K1, "K2": K2, "n": n, "p": inputs.p, "m": inputs.m, "q": inputs.q,
            "sigma_u": inputs.sigma_u, "sigma_w": inputs.sigma_w, "sigma_v": inputs.sigma_v,
            "delta": inputs.delta, "Tbar": inputs.Tbar, "Tbar0": inputs.Tbar0, "N": inputs.N,
            "calibration_C": inputs.calibration_C, "spectral_radius": rho,
        },
        phi=phi_val,
        gamma_inf_norm=gamma_norm,
        sigma_e=se,
        sigma_n_Hminus=truth.sigma_n_Hminus,
        H_norm=truth.H_norm,
        Hplus_norm=truth.Hplus_norm,
        F_norm=truth.F_norm,
        A_bar_norm=truth.A_bar_norm,
        delta_single=d_single,
        delta_multi=d_multi,
        C1=c1_val,
        C2=c2_val,
        pole_bound_single=pb_single,
        pole_bound_multi=pb_multi,
        min_trajectories=n_min,
        sigma_n_upper=sigma_n_upper(n, inputs.m, inputs.p, K1, K2, entry_product(ss.B, ss.C)),
        sample_complexity_single=sample_complexity("single", n, inputs.m, inputs.p, K, K1, K2),
        sample_complexity_multi=sample_complexity("multi", n, inputs.m, inputs.p, K, K1, K2),
        norm_bounds=asdict(nb),
        assumptions_ok=checks,
        notes=notes,
    )
