"""Geometric and conditional geometric resampling estimators of 1/w.

Both estimators repeatedly redraw the perturbation and replay the top-m
argmin until every selected arm has reappeared.  Plain GR waits for the arm
itself; the conditional variant (CGR) waits, for arms whose cumulative-loss
rank sigma_i exceeds m, for a swapped perturbation that realises the
necessary event "arm i is among the top-m perturbations of its rank prefix",
and rescales the count by C_i = sigma_i / m.  Per attempt the conditioned
test succeeds with probability w_i * sigma_i / m, so C_i * M_i stays an
unbiased estimate of 1/w_i while the expected number of attempts drops to
min(1, m / sigma_i) / w_i.

RNG consumption per outer iteration: d uniforms for the perturbation vector,
then (CGR only) one integer draw for theta.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Action, CumulativeLossState
from .perturbation import PerturbationDistribution
from .selection import RankVector, rank_membership, top_m_mask


@dataclass(frozen=True)
class ResampleOutcome:
    """Per-selected-arm inverse-weight estimates plus effort counters."""

    inv_weight: dict[int, float]   # arm -> w^-1 estimate (M for GR, C_i*M for CGR)
    counts: dict[int, int]         # arm -> raw resampling count M
    outer_iterations: int          # number of perturbation redraws (= max M)
    total_arm_resamples: int       # sum of M over selected arms
    truncated: bool


def _finish(M: np.ndarray, selected: np.ndarray, scale: dict[int, float],
            outer: int, truncated: bool) -> ResampleOutcome:
    counts = {int(i): int(M[i]) for i in selected}
    inv = {i: scale.get(i, 1.0) * c for i, c in counts.items()}
    return ResampleOutcome(
        inv_weight=inv,
        counts=counts,
        outer_iterations=outer,
        total_arm_resamples=int(sum(counts.values())),
        truncated=truncated,
    )


def gr_estimate(a_t: Action, l_hat: CumulativeLossState, eta: float,
                dist: PerturbationDistribution, rng: np.random.Generator,
                cap: Optional[int] = None) -> ResampleOutcome:
    """Geometric resampling: M_i = number of redraws until arm i reappears in
    the perturbed argmin; conditioned on l_hat, M_i ~ Geometric(w_i)."""
    if eta <= 0.0:
        raise ValueError("eta must be positive")
    base = eta * l_hat.l_hat
    d = base.shape[0]
    m = len(a_t)
    selected = a_t.as_array()

    M = np.zeros(d, dtype=np.int64)
    s = np.zeros(d, dtype=bool)
    s[selected] = True
    outer = 0
    truncated = False
    while True:
        M += s
        r = dist.sample_vector(d, rng)
        a_mask = top_m_mask(base - r, m)
        s &= ~a_mask
        outer += 1
        if not s.any():
            break
        if cap is not None and outer >= cap:
            truncated = True
            break
    return _finish(M, selected, {}, outer, truncated)


def cgr_estimate(a_t: Action, l_hat: CumulativeLossState, sigma: RankVector,
                 eta: float, dist: PerturbationDistribution,
                 rng: np.random.Generator,
                 cap: Optional[int] = None) -> ResampleOutcome:
    """Conditional geometric resampling.

    Requires sigma == ranks(l_hat.l_hat) for the same tie-break; the caller
    supplies it because ranks are reused across one round.
    """
    if eta <= 0.0:
        raise ValueError("eta must be positive")
    base = eta * l_hat.l_hat
    d = base.shape[0]
    m = len(a_t)
    selected = a_t.as_array()
    idx = np.arange(d)

    # U: selected arms whose rank prefix is strictly larger than m
    u_arms = [int(i) for i in selected if sigma[i] > m]
    scale = {i: float(sigma[i]) / m for i in u_arms}
    # per-arm precomputation: rank prefix {j : sigma_j <= sigma_i} and the
    # lower-index mask used by the O(d) membership test
    prefix = {i: np.flatnonzero(sigma <= sigma[i]) for i in u_arms}
    lower = {i: idx < i for i in u_arms}

    M = np.zeros(d, dtype=np.int64)
    s = np.zeros(d, dtype=bool)
    s[selected] = True
    u_set = set(u_arms)
    outer = 0
    truncated = False
    while True:
        M += s
        r = dist.sample_vector(d, rng)
        scores = base - r
        a_mask = top_m_mask(scores, m)
        theta = int(rng.integers(1, m + 1))
        for i in sorted(u_set):
            pfx = prefix[i]
            i_prime = _theta_th_largest(r, pfx, theta)
            # swap r_i and r_i' in place, test membership of i, then restore
            ri, rip = r[i], r[i_prime]
            scores[i] = base[i] - rip
            scores[i_prime] = base[i_prime] - ri
            hit = rank_membership(scores, i, m, lower[i])
            scores[i] = base[i] - ri
            scores[i_prime] = base[i_prime] - rip
            a_mask[i] = hit
            if hit:
                u_set.discard(i)
        s &= ~a_mask
        outer += 1
        if not s.any():
            break
        if cap is not None and outer >= cap:
            truncated = True
            break
    return _finish(M, selected, scale, outer, truncated)


def _theta_th_largest(r: np.ndarray, prefix: np.ndarray, theta: int) -> int:
    """Index (into the full vector) of the theta-th largest perturbation among
    the prefix, ties broken by ascending index."""
    vals = r[prefix]
    k = vals.size - theta  # theta-th largest == k-th smallest, 0-based
    v = np.partition(vals, k)[k]
    above = int((vals > v).sum())
    ties = prefix[np.flatnonzero(vals == v)]
    # descending by value, then ascending by index: the theta-th overall is
    # the (theta - 1 - above)-th tie in index order
    return int(ties[theta - 1 - above])


def loss_estimate(a_t: Action, observed: dict[int, float],
                  inv_weights: ResampleOutcome, d: int) -> np.ndarray:
    """Importance-weighted loss estimate: ell_hat_i = ell_i * w_i^-1 on the
    selected arms, zero elsewhere."""
    sel = set(a_t.indices)
    if set(observed.keys()) != sel:
        raise ValueError(
            f"observed keys {sorted(observed)} must equal selected arms {sorted(sel)}"
        )
    ell_hat = np.zeros(d, dtype=np.float64)
    for i in a_t.indices:
        ell = float(observed[i])
        if not (0.0 <= ell <= 1.0):
            raise ValueError(f"observed loss for arm {i} must lie in [0, 1], got {ell}")
        ell_hat[i] = ell * inv_weights.inv_weight[i]
    return ell_hat
