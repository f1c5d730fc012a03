"""Monte Carlo trials through the full identification pipeline."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .. import bounds, numerics
from ..errors import RankDeficientError
from ..ho_kalman import ho_kalman
from ..lti import StateSpace
from ..markov_ls import estimate_multi, estimate_single
from ..simulate import derive_seed, simulate_batch, simulate_single
from ..spectral import hausdorff
from .config import ExperimentConfig

_SETTING_CODE = {"single": 0, "multi": 1}


@dataclass(frozen=True)
class TrialRecord:
    setting: str
    sample_size: int
    trial_index: int
    seed: int
    d_hausdorff: float | None
    markov_err: float | None
    sigma_n_est: float | None
    near_singular: bool
    bound_value: float | None
    bound_valid: bool
    poles: tuple = field(default=(), repr=False, compare=False)

    @property
    def failed(self) -> bool:
        return self.d_hausdorff is None


@dataclass(frozen=True)
class ErrorCurve:
    sample_size: int
    median: float
    q10: float
    q90: float
    bound_overlay: float | None
    n_ok: int
    n_failed: int


@dataclass
class SweepResult:
    config: ExperimentConfig
    true_poles: np.ndarray
    records: list
    curves: list


class TrialContext:
    """Per-sweep constants: the true Markov parameters, poles and Hankel norms."""

    def __init__(self, ss: StateSpace, config: ExperimentConfig):
        self.ss = ss
        self.config = config
        self.truth = bounds.TruthQuantities(ss, config.K, config.K1, config.K2)
        self.true_poles = numerics.eig(ss.A)
        self._bounds: dict[int, tuple[float | None, bool]] = {}

    def bound(self, sample_size: int) -> tuple[float | None, bool]:
        """Pole-error bound at this sample size and whether its hypotheses hold.

        The per-trial Hankel-perturbation condition of the single-trajectory
        bound is applied by the caller.
        """
        if sample_size not in self._bounds:
            self._bounds[sample_size] = self._compute_bound(sample_size)
        return self._bounds[sample_size]

    def _compute_bound(self, sample_size):
        cfg, t = self.config, self.truth
        nz = cfg.noise
        if t.sigma_n_Hminus <= 0:
            return None, False
        noisy = nz.sigma_w > 0 and nz.sigma_v > 0
        if cfg.setting == "multi":
            inputs = bounds.BoundInputs(self.ss, cfg.K, cfg.K1, cfg.K2, nz.sigma_u, nz.sigma_w,
                                        nz.sigma_v, cfg.delta, N=sample_size,
                                        calibration_C=cfg.calibration_C)
            c1 = bounds.c1(cfg.K, self.ss.p, self.ss.m, cfg.delta)
            c2 = bounds.c2(cfg.K, self.ss.p, self.ss.n, cfg.delta, t.F_norm)
            d = bounds.delta_multi(inputs, t.Hplus_norm, t.sigma_n_Hminus, c1, c2)
            n_min = bounds.min_trajectories(self.ss.p, self.ss.n, self.ss.m, cfg.K, cfg.delta)
            valid = noisy and sample_size >= n_min
        else:
            Tbar = sample_size - cfg.K + 1
            inputs = bounds.BoundInputs(self.ss, cfg.K, cfg.K1, cfg.K2, nz.sigma_u, nz.sigma_w,
                                        nz.sigma_v, cfg.delta, Tbar=Tbar,
                                        calibration_C=cfg.calibration_C)
            if Tbar < 2 or inputs.q < 3:
                return None, False
            d = bounds.delta_single(inputs, t.H_norm, t.sigma_n_Hminus)
            valid = (noisy and nz.sigma_u == 1.0
                     and self.ss.spectral_radius ** cfg.K <= 0.99)
        return bounds.pole_bound(d, t.A_bar_norm, self.ss.n), bool(valid)


def trial_seed(base_seed: int, setting: str, sample_size: int, trial_index: int) -> int:
    return derive_seed(base_seed, _SETTING_CODE[setting], sample_size, trial_index)


def run_trial(ss: StateSpace, config: ExperimentConfig, sample_size: int, trial_index: int,
              context: TrialContext | None = None) -> TrialRecord:
    """Simulate, estimate ``G``, realize, and score one trial.

    A rank-deficient regression is recorded as a failed trial (no pole
    error) instead of raising.
    """
    ctx = context or TrialContext(ss, config)
    seed = trial_seed(config.base_seed, config.setting, sample_size, trial_index)
    bound_value, bound_valid = ctx.bound(sample_size)
    try:
        if config.setting == "multi":
            g_hat = estimate_multi(simulate_batch(ss, config.noise, config.K, sample_size, seed))
        else:
            g_hat = estimate_single(simulate_single(ss, config.noise, sample_size, seed), config.K)
    except RankDeficientError:
        return TrialRecord(config.setting, sample_size, trial_index, seed, None, None, None,
                           False, bound_value, False)
    r = ho_kalman(g_hat, config.n, config.K1, config.K2, warn=False)
    poles = r.poles()
    if config.setting == "single" and bound_valid:
        L_err = np.linalg.norm(r.hankel.L - ctx.truth.hankel.L, 2)
        bound_valid = bool(L_err <= ctx.truth.sigma_n_Hminus / 2)
    return TrialRecord(
        setting=config.setting,
        sample_size=sample_size,
        trial_index=trial_index,
        seed=seed,
        d_hausdorff=hausdorff(poles, ctx.true_poles),
        markov_err=float(np.linalg.norm(g_hat.G - ctx.truth.G.G, 2)),
        sigma_n_est=float(r.sigma[-1]),
        near_singular=r.near_singular,
        bound_value=bound_value,
        bound_valid=bound_valid,
        poles=tuple(poles),
    )


def summarize(records, sample_sizes, overlays=None) -> list[ErrorCurve]:
    """Median and 10/90 % quantiles of the pole error per sample size,
    over trials that did not fail."""
    overlays = overlays or {}
    curves = []
    for s in sample_sizes:
        group = [r for r in records if r.sample_size == s]
        ok = np.array([r.d_hausdorff for r in group if not r.failed], dtype=float)
        if ok.size:
            q10, med, q90 = np.quantile(ok, [0.1, 0.5, 0.9])
        else:
            q10 = med = q90 = math.nan
        curves.append(ErrorCurve(s, float(med), float(q10), float(q90), overlays.get(s),
                                 int(ok.size), len(group) - int(ok.size)))
    return curves


def run_sweep(config: ExperimentConfig, threads: int = 1) -> SweepResult:
    """Run every ``(sample_size, trial)`` pair of the sweep.

    Output is ordered by ``(sample_size, trial_index)`` and does not depend on
    ``threads``.
    """
    ss = config.state_space()
    ctx = TrialContext(ss, config)
    jobs = [(s, i) for s in config.sweep for i in range(config.trials)]
    for s in config.sweep:
        ctx.bound(s)  # fill the cache before any worker reads it

    def work(job):
        return run_trial(ss, config, job[0], job[1], ctx)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(work, jobs))
    else:
        records = [work(j) for j in jobs]
    records.sort(key=lambda r: (r.sample_size, r.trial_index))
    overlays = {s: ctx.bound(s)[0] for s in config.sweep}
    return SweepResult(config, ctx.true_poles, records, summarize(records, config.sweep, overlays))
