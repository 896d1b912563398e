"""FTPL for m-set semi-bandits with geometric and conditional geometric
resampling, plus the statistical oracle suite and experiment harness."""

from .core import (
    Action,
    ConfigError,
    CumulativeLossState,
    ExperimentConfig,
    RoundRecord,
    derive_trial_rng,
    derive_trial_seed,
    validate_config,
)
from .environments import (
    StochasticBernoulliEnv,
    SwitchingAdversarialEnv,
    make_stochastic,
    make_switching,
)
from .estimator import ResampleOutcome, cgr_estimate, gr_estimate, loss_estimate
from .harness import ExperimentResult, cli_main, run_experiment, run_trial, write_csv
from .oracle import (
    DecompositionReport,
    PhiQuery,
    check_decomposition,
    phi_exact,
    phi_mc,
    topm_expectation_bound,
    topm_sum_bound,
)
from .perturbation import PerturbationDistribution, frechet, pareto
from .policy import FtplPolicy, learning_rate
from .selection import ranks, top_m_argmin, top_m_mask

__version__ = "0.1.0"

__all__ = [
    "Action",
    "ConfigError",
    "CumulativeLossState",
    "DecompositionReport",
    "ExperimentConfig",
    "ExperimentResult",
    "FtplPolicy",
    "PerturbationDistribution",
    "PhiQuery",
    "ResampleOutcome",
    "RoundRecord",
    "StochasticBernoulliEnv",
    "SwitchingAdversarialEnv",
    "cgr_estimate",
    "check_decomposition",
    "cli_main",
    "derive_trial_rng",
    "derive_trial_seed",
    "frechet",
    "gr_estimate",
    "learning_rate",
    "loss_estimate",
    "make_stochastic",
    "make_switching",
    "pareto",
    "phi_exact",
    "phi_mc",
    "ranks",
    "run_experiment",
    "run_trial",
    "top_m_argmin",
    "top_m_mask",
    "topm_expectation_bound",
    "topm_sum_bound",
    "validate_config",
    "write_csv",
]
