"""Monte Carlo reproduction of the spring-damper pole-estimation experiments."""

from .config import ExperimentConfig, dump_config, load_config
from .export import export, read_curves
from .runner import ErrorCurve, SweepResult, TrialRecord, run_sweep, run_trial, summarize
from .systems import BUILTIN_PARAMS, builtin_system

__all__ = [
    "BUILTIN_PARAMS",
    "ErrorCurve",
    "ExperimentConfig",
    "SweepResult",
    "TrialRecord",
    "builtin_system",
    "dump_config",
    "export",
    "load_config",
    "read_curves",
    "run_sweep",
    "run_trial",
    "summarize",
]
