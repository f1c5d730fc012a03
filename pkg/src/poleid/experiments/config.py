"""Experiment configuration and its JSON file format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ConfigError
from ..lti import StateSpace
from ..simulate import NoiseSpec
from .systems import BUILTIN_PARAMS, builtin_system

_NOISE_KEYS = {"sigma_u", "sigma_w", "sigma_v"}
_KEYS = {"system", "setting", "K", "K1", "K2", "n", "sweep", "trials", "noise",
         "delta", "calibration_C", "base_seed"}


@dataclass(frozen=True)
class ExperimentConfig:
    """One Monte Carlo sweep.

    ``sweep`` holds trajectory lengths ``T`` for ``setting="single"`` and
    trajectory counts ``N`` (each of length ``K``) for ``setting="multi"``.
    """

    system: str | StateSpace = "stable"
    setting: str = "multi"
    K: int = 15
    K1: int = 8
    K2: int = 6
    n: int = 4
    sweep: tuple = tuple(range(20, 201, 20))
    trials: int = 100
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    delta: float = 0.05
    calibration_C: float = 1.0
    base_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "sweep", tuple(int(s) for s in self.sweep))
        if isinstance(self.system, str) and self.system not in BUILTIN_PARAMS:
            raise ConfigError(f"unknown system {self.system!r}")
        if self.setting not in ("single", "multi"):
            raise ConfigError(f"setting must be 'single' or 'multi', got {self.setting!r}")
        if self.K != self.K1 + self.K2 + 1:
            raise ConfigError(f"K={self.K} must equal K1 + K2 + 1 = {self.K1 + self.K2 + 1}")
        if self.K1 < self.n or self.K2 < self.n:
            raise ConfigError(f"K1={self.K1} and K2={self.K2} must be >= n={self.n}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.sweep or any(b <= a for a, b in zip(self.sweep, self.sweep[1:])):
            raise ConfigError(f"sweep must be non-empty and strictly increasing, got {self.sweep}")
        smallest = self.K if self.setting == "single" else 1
        if self.sweep[0] < smallest:
            raise ConfigError(f"sweep values must be >= {smallest} for setting {self.setting!r}")
        if self.state_space().n != self.n:
            raise ConfigError(f"n={self.n} does not match the system order {self.state_space().n}")

    def state_space(self) -> StateSpace:
        if isinstance(self.system, StateSpace):
            return self.system
        return builtin_system(self.system)

    def to_dict(self) -> dict:
        return {
            "system": self.system if isinstance(self.system, str) else self.system.to_dict(),
            "setting": self.setting,
            "K": self.K, "K1": self.K1, "K2": self.K2, "n": self.n,
            "sweep": list(self.sweep),
            "trials": self.trials,
            "noise": {"sigma_u": self.noise.sigma_u, "sigma_w": self.noise.sigma_w,
                      "sigma_v": self.noise.sigma_v},
            "delta": self.delta,
            "calibration_C": self.calibration_C,
            "base_seed": self.base_seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        unknown = set(d) - _KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        d = dict(d)
        noise = d.pop("noise", {})
        unknown = set(noise) - _NOISE_KEYS
        if unknown:
            raise ConfigError(f"unknown noise keys: {sorted(unknown)}")
        system = d.get("system", "stable")
        if isinstance(system, dict):
            try:
                d["system"] = StateSpace.from_dict(system)
            except (KeyError, ValueError) as exc:
                raise ConfigError(f"bad custom system: {exc}") from exc
        base_seed = int(d.get("base_seed", 0))
        d["noise"] = NoiseSpec(base_seed=base_seed, **noise)
        if "n" not in d and isinstance(d.get("system"), StateSpace):
            d["n"] = d["system"].n
        return cls(**d)


def load_config(path) -> ExperimentConfig:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return ExperimentConfig.from_dict(data)


def dump_config(config: ExperimentConfig) -> str:
    return json.dumps(config.to_dict(), indent=2, sort_keys=True) + "\n"
