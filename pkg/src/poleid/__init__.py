"""Finite-sample LTI identification: least-squares Markov parameters,
Ho-Kalman realization, pole-error measurement and its theoretical bounds."""

from .ho_kalman import Realization, ho_kalman, realization_markov
from .lti import (
    ExtendedMatrices,
    HankelSet,
    MarkovParams,
    SpringDamperParams,
    StateSpace,
    extended_matrices,
    hankel_from_markov,
    markov_matrix,
    spring_damper_continuous,
    zoh_discretize,
)
from .markov_ls import assemble_multi, assemble_single, estimate_multi, estimate_single
from .simulate import NoiseSpec, SingleTrajectory, TrajectoryBatch, simulate_batch, simulate_single
from .spectral import elsner_bound, hausdorff, pole_distance, spectrum_variation

__version__ = "0.1.0"

__all__ = [
    "ExtendedMatrices",
    "HankelSet",
    "MarkovParams",
    "NoiseSpec",
    "Realization",
    "SingleTrajectory",
    "SpringDamperParams",
    "StateSpace",
    "TrajectoryBatch",
    "assemble_multi",
    "assemble_single",
    "elsner_bound",
    "estimate_multi",
    "estimate_single",
    "extended_matrices",
    "hankel_from_markov",
    "hausdorff",
    "ho_kalman",
    "markov_matrix",
    "pole_distance",
    "realization_markov",
    "simulate_batch",
    "simulate_single",
    "spectrum_variation",
    "spring_damper_continuous",
    "zoh_discretize",
]
