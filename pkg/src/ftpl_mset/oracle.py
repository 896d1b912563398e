"""Ground-truth base-arm selection probabilities and probability identities.

phi_exact integrates, over the perturbation of the queried arm, the
Poisson-binomial probability that fewer than m_tilde other arms of the
subset out-perturb it.  The integral is taken in the variable
u = F(r_i) in (0, 1), which maps the infinite support onto the unit
interval with a bounded integrand.  phi_mc estimates the same probability
by direct simulation; the two implementations share no code with the
estimators or with each other, so they can adjudicate bugs.

All functions are pure given (inputs, rng); long Monte-Carlo loops accept a
cooperative ``cancel`` callable checked once per chunk.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gamma
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad

from .perturbation import PerturbationDistribution

_MC_CHUNK = 100_000


class OracleError(RuntimeError):
    pass


@dataclass(frozen=True)
class PhiQuery:
    """Probability that arm i is among the m_tilde perturbed leaders of the
    subset, given scaled losses lam (= eta * L_hat)."""

    lam: np.ndarray
    i: int
    m_tilde: int
    dist: PerturbationDistribution
    subset: Optional[np.ndarray] = None  # base-arm subset B, default all of [d]

    def resolved_subset(self) -> np.ndarray:
        lam = np.asarray(self.lam)
        sub = np.arange(lam.shape[0]) if self.subset is None else np.asarray(self.subset)
        if self.i not in sub:
            raise ValueError(f"arm {self.i} must belong to the subset {sub}")
        if not 1 <= self.m_tilde <= sub.size:
            raise ValueError(f"m_tilde must lie in [1, {sub.size}], got {self.m_tilde}")
        return sub


def _poisson_binomial_at_most(probs: np.ndarray, c: int) -> float:
    """P[sum of independent Bernoulli(probs) <= c] by the standard O(n*c)
    truncated convolution; mass above c is dropped, never re-entered."""
    if c < 0:
        return 0.0
    q = np.zeros(c + 1)
    q[0] = 1.0
    for p in probs:
        q[1:] = q[1:] * (1.0 - p) + q[:-1] * p
        q[0] *= 1.0 - p
        np.clip(q, 0.0, 1.0, out=q)
    return float(min(max(q.sum(), 0.0), 1.0))


def phi_exact(q: PhiQuery, abs_tol: float = 1e-8) -> float:
    """Adaptive quadrature of the selection probability, absolute error
    target ``abs_tol``; raises OracleError if the quadrature cannot certify
    that accuracy."""
    lam = np.asarray(q.lam, dtype=np.float64)
    sub = q.resolved_subset()
    dist = q.dist
    others = sub[sub != q.i]
    lam_i = float(lam[q.i])
    lam_others = lam[others]
    c = q.m_tilde - 1

    if others.size <= c:
        return 1.0  # everyone fits in the top m_tilde

    def integrand(u: float) -> float:
        z = dist.inverse_cdf(u) - lam_i
        exceed = np.asarray(dist.sf(z + lam_others), dtype=np.float64)
        return _poisson_binomial_at_most(exceed, c)

    # integrand kinks where some z + lam_j crosses the support left endpoint
    pts = dist.cdf(dist.nu - lam_others + lam_i)
    pts = sorted({float(p) for p in pts if 0.0 < p < 1.0})
    val, err = quad(integrand, 0.0, 1.0, epsabs=abs_tol / 10.0, epsrel=1e-10,
                    limit=400, points=pts or None)
    if err > abs_tol:
        raise OracleError(f"quadrature reached abs error {err:.3e} > {abs_tol:.1e}")
    return float(min(max(val, 0.0), 1.0))


def _descending_rank_events(r: np.ndarray, lam: np.ndarray, sub: np.ndarray,
                            i: int) -> np.ndarray:
    """Number of subset arms out-ranking arm i (value desc, index-asc ties),
    for a chunk of perturbation draws r of shape (n, d)."""
    scores = r[:, sub] - lam[sub]
    pos = int(np.flatnonzero(sub == i)[0])
    s_i = scores[:, pos][:, None]
    better = (scores > s_i) | ((scores == s_i) & (sub < i)[None, :])
    return better.sum(axis=1)


def phi_mc(q: PhiQuery, n: int, rng: np.random.Generator,
           cancel: Optional[Callable[[], bool]] = None) -> tuple[float, float]:
    """Monte-Carlo estimate of the same probability with its binomial SE."""
    lam = np.asarray(q.lam, dtype=np.float64)
    sub = q.resolved_subset()
    d = lam.shape[0]
    hits = 0
    done = 0
    while done < n:
        if cancel is not None and cancel():
            break
        k = min(_MC_CHUNK, n - done)
        r = q.dist.inverse_cdf(rng.random((k, d)))
        exceed = _descending_rank_events(r, lam, sub, q.i)
        hits += int((exceed <= q.m_tilde - 1).sum())
        done += k
    if done == 0:
        raise OracleError("cancelled before any sample was drawn")
    p = hits / done
    se = float(np.sqrt(max(p * (1.0 - p), 1e-300) / done))
    return p, se


@dataclass(frozen=True)
class DecompositionReport:
    phi_full: float          # phi_i(lam; m_tilde, B)
    phi_reduced: float       # phi_i(lam; m_tilde - 1, B \ {j})
    phi_boundary: float      # P[rank_i == m_tilde <= rank_j]
    residual: float
    residual_se: float
    n: int
    paired: bool


def check_decomposition(lam, i: int, j: int, m_tilde: int,
                        dist: PerturbationDistribution, n: int,
                        rng: np.random.Generator,
                        subset: Optional[np.ndarray] = None,
                        paired: bool = True) -> DecompositionReport:
    """Verify phi_i(m_tilde, B) = phi_i(m_tilde - 1, B\\{j}) + P[rank_i = m_tilde <= rank_j].

    With ``paired=True`` all three terms are evaluated on one shared sample,
    where the three indicator events partition and the residual is exactly 0
    per sample; with ``paired=False`` each term gets an independent sample and
    the residual is 0 only up to Monte-Carlo noise.

    For m_tilde = 1 the reduced event asks for rank <= 0, which is empty by
    convention, so the identity degenerates to phi_i = P[rank_i = 1 <= rank_j].
    """
    lam = np.asarray(lam, dtype=np.float64)
    d = lam.shape[0]
    sub = np.arange(d) if subset is None else np.asarray(subset)
    if i == j or i not in sub or j not in sub:
        raise ValueError("need distinct i, j inside the subset")
    if m_tilde < 1:
        raise ValueError("m_tilde must be >= 1")
    sub_minus_j = sub[sub != j]

    def draw(k: int) -> np.ndarray:
        return dist.inverse_cdf(rng.random((k, d)))

    def terms(r: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        rank_i = _descending_rank_events(r, lam, sub, i) + 1
        rank_i_red = _descending_rank_events(r, lam, sub_minus_j, i) + 1
        rank_j = _descending_rank_events(r, lam, sub, j) + 1
        full = rank_i <= m_tilde
        reduced = rank_i_red <= m_tilde - 1
        boundary = (rank_i == m_tilde) & (rank_j >= m_tilde)
        return full, reduced, boundary

    if paired:
        full, reduced, boundary = terms(draw(n))
        resid = full.astype(np.float64) - reduced - boundary
        return DecompositionReport(
            phi_full=float(full.mean()), phi_reduced=float(reduced.mean()),
            phi_boundary=float(boundary.mean()), residual=float(resid.mean()),
            residual_se=float(resid.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0,
            n=n, paired=True,
        )
    full, _, _ = terms(draw(n))
    _, reduced, _ = terms(draw(n))
    _, _, boundary = terms(draw(n))
    p1, p2, p3 = full.mean(), reduced.mean(), boundary.mean()
    se = float(np.sqrt((p1 * (1 - p1) + p2 * (1 - p2) + p3 * (1 - p3)) / n))
    return DecompositionReport(
        phi_full=float(p1), phi_reduced=float(p2), phi_boundary=float(p3),
        residual=float(p1 - p2 - p3), residual_se=se, n=n, paired=False,
    )


def topm_sum_bound(dist: PerturbationDistribution, d: int, m: int) -> float:
    """Closed-form upper bound on E[sum of the m largest of d i.i.d. draws]:
    (a/(a-1) (m-1)^(1-1/a) + Gamma(1-1/a)) (d+1)^(1/a), plus m for Frechet."""
    a = dist.alpha
    bound = (a / (a - 1.0) * (m - 1) ** (1.0 - 1.0 / a) + gamma(1.0 - 1.0 / a)) \
        * (d + 1) ** (1.0 / a)
    if dist.kind == "frechet":
        bound += m
    return float(bound)


def topm_expectation_bound(dist: PerturbationDistribution, d: int, m: int,
                           n: int, rng: np.random.Generator,
                           cancel: Optional[Callable[[], bool]] = None
                           ) -> tuple[float, float]:
    """(Monte-Carlo estimate of E[top-m sum], closed-form bound)."""
    if not 1 <= m <= d:
        raise ValueError("need 1 <= m <= d")
    total = 0.0
    done = 0
    while done < n:
        if cancel is not None and cancel():
            break
        k = min(_MC_CHUNK // max(d, 1) * 8, n - done) or 1
        r = dist.inverse_cdf(rng.random((k, d)))
        if m == d:
            total += float(r.sum())
        else:
            part = np.partition(r, d - m, axis=1)[:, d - m:]
            total += float(part.sum())
        done += k
    if done == 0:
        raise OracleError("cancelled before any sample was drawn")
    return total / done, topm_sum_bound(dist, d, m)
