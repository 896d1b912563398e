"""Bernoulli loss generators and the pseudo-regret comparator.

Two environments:

* stochastic: fixed means, (1 - gap)/2 on the m optimal arms and
  (1 + gap)/2 on the rest;
* switching (stochastically constrained adversarial): the optimal/suboptimal
  mean pair alternates between (0, gap) and (1 - gap, 1) in phases whose
  lengths grow by a factor of 1.6.

By default the switching environment swaps the mean *values* on fixed arm
blocks (arms 0..m-1 stay the better block throughout); set
``identity_swap=True`` to swap which block is optimal instead.  The first
phase uses the (0, gap) pair by default (``start_low``).

Pseudo-regret increments use the known mean vectors rather than realised
losses: that is exactly the expectation being estimated and needs far fewer
trials for tight confidence bands.
"""

from __future__ import annotations

import numpy as np

from .core import Action

GROWTH_FACTOR = 1.6


class StochasticBernoulliEnv:
    def __init__(self, d: int, m: int, gap: float):
        if not 1 <= m < d:
            raise ValueError("need 1 <= m < d")
        if not 0.0 <= gap < 1.0:
            raise ValueError("gap must lie in [0, 1)")
        self.d = d
        self.m = m
        self.gap = gap
        self.mu = np.full(d, (1.0 + gap) / 2.0)
        self.mu[:m] = (1.0 - gap) / 2.0
        self.optimal_set = Action(tuple(range(m)))

    def means(self, t: int) -> np.ndarray:
        return self.mu

    def loss_vector(self, t: int, rng: np.random.Generator) -> np.ndarray:
        """Independent Bernoulli losses; consumes exactly d uniforms."""
        return (rng.random(self.d) < self.mu).astype(np.float64)

    def optimal_fixed_action(self, horizon: int) -> tuple[Action, np.ndarray]:
        per_round = float(self.mu[:self.m].sum())
        return self.optimal_set, np.full(horizon, per_round)

    def pseudo_regret_increment(self, t: int, a_t: Action, comparator: Action) -> float:
        mu = self.mu
        return float(mu[a_t.as_array()].sum() - mu[comparator.as_array()].sum())


class SwitchingAdversarialEnv:
    def __init__(self, d: int, m: int, gap: float, phase_len: int = 10,
                 growth: float = GROWTH_FACTOR, identity_swap: bool = False,
                 start_low: bool = True):
        if not 1 <= m < d:
            raise ValueError("need 1 <= m < d")
        if not 0.0 < gap < 1.0:
            raise ValueError("gap must lie in (0, 1)")
        if phase_len < 1:
            raise ValueError("phase_len must be >= 1")
        if growth <= 1.0:
            raise ValueError("growth must exceed 1")
        self.d = d
        self.m = m
        self.gap = gap
        self.phase_len = phase_len
        self.growth = growth
        self.identity_swap = identity_swap
        self.start_low = start_low
        self._boundaries = [0]  # cumulative rounds covered after each phase

    def _phase_length(self, p: int) -> int:
        return int(np.ceil(self.phase_len * self.growth**p))

    def _extend_boundaries(self, t: int) -> None:
        while self._boundaries[-1] < t:
            p = len(self._boundaries) - 1
            self._boundaries.append(self._boundaries[-1] + self._phase_length(p))

    def phase_of(self, t: int) -> int:
        """0-based phase index containing round t (1-based)."""
        if t < 1:
            raise ValueError("t must be >= 1")
        self._extend_boundaries(t)
        return int(np.searchsorted(self._boundaries, t, side="left")) - 1

    def means(self, t: int) -> np.ndarray:
        p = self.phase_of(t)
        low_phase = (p % 2 == 0) == self.start_low
        good, bad = (0.0, self.gap) if low_phase else (1.0 - self.gap, 1.0)
        mu = np.full(self.d, bad)
        if self.identity_swap and p % 2 == 1:
            mu[self.m:] = good  # roles swap: the complement block is optimal
        else:
            mu[:self.m] = good
        return mu

    def loss_vector(self, t: int, rng: np.random.Generator) -> np.ndarray:
        return (rng.random(self.d) < self.means(t)).astype(np.float64)

    def integrated_means(self, horizon: int) -> np.ndarray:
        """Exact per-arm sum of means over rounds 1..horizon."""
        total = np.zeros(self.d)
        self._extend_boundaries(horizon)
        for p in range(len(self._boundaries) - 1):
            lo, hi = self._boundaries[p], min(self._boundaries[p + 1], horizon)
            if lo >= horizon:
                break
            total += (hi - lo) * self.means(lo + 1)
        return total

    def optimal_fixed_action(self, horizon: int) -> tuple[Action, np.ndarray]:
        """Best fixed m-set against the known mean schedule, and its exact
        expected per-round loss curve."""
        totals = self.integrated_means(horizon)
        order = np.lexsort((np.arange(self.d), totals))
        a_star = Action(tuple(sorted(int(i) for i in order[:self.m])))
        sel = a_star.as_array()
        curve = np.array([self.means(t)[sel].sum() for t in range(1, horizon + 1)])
        return a_star, curve

    def pseudo_regret_increment(self, t: int, a_t: Action, comparator: Action) -> float:
        mu = self.means(t)
        return float(mu[a_t.as_array()].sum() - mu[comparator.as_array()].sum())


def make_stochastic(d: int, m: int, gap: float) -> StochasticBernoulliEnv:
    return StochasticBernoulliEnv(d, m, gap)


def make_switching(d: int, m: int, gap: float, phase_len: int = 10,
                   identity_swap: bool = False,
                   start_low: bool = True) -> SwitchingAdversarialEnv:
    return SwitchingAdversarialEnv(d, m, gap, phase_len=phase_len,
                                   identity_swap=identity_swap,
                                   start_low=start_low)
