"""Follow-the-Perturbed-Leader policy: state, learning-rate schedule, one
round of play.

Each round draws a fresh perturbation vector r_t, plays the top-m argmin of
eta_t * L_hat - r_t, then estimates the inverse selection weights of the
played arms by (conditional) geometric resampling at the *same* eta_t and
L_hat, and accumulates the importance-weighted loss estimate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Action, CumulativeLossState
from .estimator import ResampleOutcome, cgr_estimate, gr_estimate, loss_estimate
from .perturbation import PerturbationDistribution
from .selection import ranks, top_m_argmin


def learning_rate(t: int, c: float, m: int, d: int, alpha: float) -> float:
    """eta_t = (c / sqrt(t)) * m^(1/2 - 1/alpha) * d^(1/alpha - 1/2).

    At alpha = 2 both exponents vanish and the schedule degenerates to
    c / sqrt(t); the same formula serves every shape parameter.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    e = 0.5 - 1.0 / alpha
    return (c / np.sqrt(t)) * m**e * d**(-e)


@dataclass(frozen=True)
class RoundUpdate:
    """What one update produced: effort counters and the eta it used."""

    eta: float
    outcome: ResampleOutcome


class FtplPolicy:
    def __init__(self, d: int, m: int, dist: PerturbationDistribution,
                 lr_constant: float, estimator_kind: str = "cgr",
                 resample_cap: int | None = None):
        if not 1 <= m < d:
            raise ValueError("need 1 <= m < d")
        if estimator_kind not in ("gr", "cgr"):
            raise ValueError(f"unknown estimator kind {estimator_kind!r}")
        if lr_constant <= 0:
            raise ValueError("lr constant c must be positive")
        self.d = d
        self.m = m
        self.dist = dist
        self.lr_constant = lr_constant
        self.estimator_kind = estimator_kind
        self.resample_cap = resample_cap
        self.state = CumulativeLossState.initial(d)

    def current_eta(self) -> float:
        return learning_rate(self.state.t, self.lr_constant, self.m, self.d,
                             self.dist.alpha)

    def select_action(self, rng: np.random.Generator) -> tuple[Action, np.ndarray]:
        """Draw r_t and play the perturbed leader; r_t is returned for
        telemetry only (resampling draws fresh vectors)."""
        r_t = self.dist.sample_vector(self.d, rng)
        scores = self.current_eta() * self.state.l_hat - r_t
        return top_m_argmin(scores, self.m), r_t

    def update(self, a_t: Action, observed: dict[int, float],
               rng: np.random.Generator) -> RoundUpdate:
        """Estimate inverse weights for the played arms at the current round's
        eta and L_hat, accumulate the loss estimate, advance the round."""
        eta = self.current_eta()
        if self.estimator_kind == "gr":
            outcome = gr_estimate(a_t, self.state, eta, self.dist, rng,
                                  cap=self.resample_cap)
        else:
            sigma = ranks(self.state.l_hat)
            outcome = cgr_estimate(a_t, self.state, sigma, eta, self.dist, rng,
                                   cap=self.resample_cap)
        ell_hat = loss_estimate(a_t, observed, outcome, self.d)
        self.state = self.state.advanced(ell_hat)
        return RoundUpdate(eta=eta, outcome=outcome)
