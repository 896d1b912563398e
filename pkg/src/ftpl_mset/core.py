"""Shared domain types, configuration validation, and per-trial RNG derivation.

Reproducibility contract: every random quantity in a trial is drawn from a
single sequential PCG64 stream derived from (master_seed, trial index) by a
64-bit avalanche mix.  Within a round the consumption order is fixed:

    1. action perturbation (d uniforms),
    2. environment loss draw (d uniforms),
    3. resampling: per outer iteration, one perturbation vector (d uniforms)
       followed, for the conditional estimator, by one theta draw.

Identical (master_seed, trial) pairs therefore yield bit-identical trials on
every platform, independent of scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

_U64 = 0xFFFFFFFFFFFFFFFF

DIST_KINDS = ("frechet", "pareto")
ESTIMATOR_KINDS = ("gr", "cgr")
ENV_KINDS = ("stochastic", "switching")


class ConfigError(ValueError):
    """Raised when an experiment configuration violates an invariant."""


@dataclass(frozen=True)
class Action:
    """A size-m subset of base-arm indices, stored sorted ascending."""

    indices: tuple[int, ...]

    @classmethod
    def of(cls, indices) -> "Action":
        idx = tuple(sorted(int(i) for i in indices))
        if len(set(idx)) != len(idx):
            raise ValueError(f"action indices must be distinct, got {idx}")
        if idx and idx[0] < 0:
            raise ValueError(f"action indices must be non-negative, got {idx}")
        return cls(idx)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, i) -> bool:
        return int(i) in self.indices

    def as_mask(self, d: int) -> np.ndarray:
        mask = np.zeros(d, dtype=bool)
        mask[list(self.indices)] = True
        return mask

    def as_array(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=np.int64)


def validate_action(action: Action, d: int, m: int) -> Action:
    if len(action.indices) != m:
        raise ValueError(f"action must select exactly {m} arms, got {len(action.indices)}")
    if action.indices and (action.indices[0] < 0 or action.indices[-1] >= d):
        raise ValueError(f"action indices must lie in [0, {d}), got {action.indices}")
    return action


@dataclass(frozen=True)
class CumulativeLossState:
    """Cumulative estimated loss vector with the current round index.

    Treated as an immutable value: updates produce a new state.
    """

    l_hat: np.ndarray
    t: int

    @classmethod
    def initial(cls, d: int) -> "CumulativeLossState":
        return cls(l_hat=np.zeros(d, dtype=np.float64), t=1)

    @property
    def d(self) -> int:
        return self.l_hat.shape[0]

    def advanced(self, ell_hat: np.ndarray) -> "CumulativeLossState":
        return CumulativeLossState(l_hat=self.l_hat + ell_hat, t=self.t + 1)

    def check(self) -> "CumulativeLossState":
        if self.t < 1:
            raise ValueError(f"round index must be >= 1, got {self.t}")
        if not np.all(np.isfinite(self.l_hat)) or np.any(self.l_hat < 0):
            raise ValueError("cumulative losses must be finite and non-negative")
        return self


@dataclass(frozen=True)
class RoundRecord:
    """Per-round telemetry emitted at checkpoint rounds."""

    trial: int
    t: int
    cum_pseudo_regret: float
    resamples_this_round: int
    elapsed_ns: int


@dataclass(frozen=True)
class ExperimentConfig:
    d: int = 16
    m: int = 3
    horizon: int = 10_000
    alpha: float = 2.0
    dist_kind: str = "frechet"
    estimator_kind: str = "cgr"
    lr_constant: float = 1.0
    env_kind: str = "stochastic"
    gap: float = 0.125
    trials: int = 100
    master_seed: int = 42
    resample_cap: Optional[int] = None
    checkpoint_every: int = 10
    phase_len: int = 10

    def with_(self, **kwargs) -> "ExperimentConfig":
        return replace(self, **kwargs)


def validate_config(cfg: ExperimentConfig) -> ExperimentConfig:
    """Return cfg unchanged iff every invariant holds; raise ConfigError naming
    the first violated one otherwise."""
    if cfg.d < 2:
        raise ConfigError("d must be at least 2")
    if cfg.m < 1:
        raise ConfigError("m must be at least 1")
    if cfg.m >= cfg.d:
        raise ConfigError("m must be < d")
    if cfg.horizon < 1:
        raise ConfigError("horizon T must be at least 1")
    if not (cfg.alpha > 1.0):
        raise ConfigError("alpha must exceed 1")
    if cfg.dist_kind not in DIST_KINDS:
        raise ConfigError(f"dist_kind must be one of {DIST_KINDS}, got {cfg.dist_kind!r}")
    if cfg.estimator_kind not in ESTIMATOR_KINDS:
        raise ConfigError(
            f"estimator_kind must be one of {ESTIMATOR_KINDS}, got {cfg.estimator_kind!r}"
        )
    if not (cfg.lr_constant > 0.0):
        raise ConfigError("lr constant c must be positive")
    if cfg.env_kind not in ENV_KINDS:
        raise ConfigError(f"env_kind must be one of {ENV_KINDS}, got {cfg.env_kind!r}")
    if not (0.0 < cfg.gap < 1.0):
        raise ConfigError("gap must lie in (0, 1)")
    if cfg.trials < 1:
        raise ConfigError("trials must be at least 1")
    if not (0 <= int(cfg.master_seed) <= _U64):
        raise ConfigError("master_seed must be a 64-bit unsigned integer")
    if cfg.resample_cap is not None and cfg.resample_cap < 1:
        raise ConfigError("resample_cap must be at least 1 when set")
    if cfg.checkpoint_every < 1:
        raise ConfigError("checkpoint_every must be at least 1")
    if cfg.phase_len < 1:
        raise ConfigError("phase_len must be at least 1")
    return cfg


def _mix64(x: int) -> int:
    """splitmix64 finalizer: full-avalanche 64-bit mix."""
    z = (x + 0x9E3779B97F4A7C15) & _U64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _U64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _U64
    return (z ^ (z >> 31)) & _U64


def derive_trial_seed(master_seed: int, trial: int) -> int:
    """Deterministic 64-bit seed for one trial's stream."""
    return _mix64((int(master_seed) & _U64) ^ _mix64(int(trial) & _U64))


def derive_trial_rng(master_seed: int, trial: int) -> np.random.Generator:
    """One PCG64 stream per (master_seed, trial): bit-identical across runs and
    platforms, statistically independent across trials."""
    return np.random.Generator(np.random.PCG64(derive_trial_seed(master_seed, trial)))
