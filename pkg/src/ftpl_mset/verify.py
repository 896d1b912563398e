"""Oracle property suite behind the CLI --verify flag.

Each check pins a numerically testable identity: quantile round-trips,
selection-probability normalisation, exact-vs-Monte-Carlo agreement,
monotonicity in the scaled losses, the rank decomposition identity, and the
closed-form bound on the expected top-m perturbation sum.  Runs in a few
seconds at desk scale and exits nonzero on any failure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import derive_trial_rng
from .oracle import PhiQuery, check_decomposition, phi_exact, phi_mc, topm_expectation_bound
from .perturbation import PerturbationDistribution


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _dists() -> list[PerturbationDistribution]:
    return [PerturbationDistribution(kind, alpha)
            for kind in ("frechet", "pareto") for alpha in (1.5, 2.0, 3.0)]


def run_all(seed: int = 20240) -> list[CheckResult]:
    rng = derive_trial_rng(seed, 0)
    out: list[CheckResult] = []

    # quantile round-trip on a grid
    worst = 0.0
    grid = np.linspace(0.01, 0.99, 99)
    for dist in _dists():
        worst = max(worst, float(np.max(np.abs(dist.cdf(dist.inverse_cdf(grid)) - grid))))
    out.append(CheckResult("quantile-roundtrip", worst < 1e-12, f"max |F(F^-1(u))-u| = {worst:.2e}"))

    # normalisation: sum_i phi_i = m
    worst = 0.0
    for k in range(6):
        dist = _dists()[k]
        d = int(rng.integers(4, 8))
        m = int(rng.integers(1, d))
        lam = np.sort(rng.random(d) * 2.0)
        total = sum(phi_exact(PhiQuery(lam, i, m, dist)) for i in range(d))
        worst = max(worst, abs(total - m))
    out.append(CheckResult("phi-normalisation", worst < 1e-6, f"max |sum phi - m| = {worst:.2e}"))

    # exact vs Monte-Carlo
    worst_z = 0.0
    for k in range(6):
        dist = _dists()[k]
        d = int(rng.integers(4, 8))
        m = int(rng.integers(1, d))
        lam = rng.random(d) * 2.0
        i = int(rng.integers(0, d))
        exact = phi_exact(PhiQuery(lam, i, m, dist))
        est, se = phi_mc(PhiQuery(lam, i, m, dist), 200_000, rng)
        worst_z = max(worst_z, abs(est - exact) / max(se, 1e-12))
    out.append(CheckResult("phi-exact-vs-mc", worst_z < 3.0, f"max |z| = {worst_z:.2f}"))

    # monotonicity in lambda_i
    dist = PerturbationDistribution("frechet", 2.0)
    lam = np.array([0.0, 0.4, 0.8, 1.2, 1.6])
    base_i = phi_exact(PhiQuery(lam, 1, 2, dist))
    base_j = phi_exact(PhiQuery(lam, 3, 2, dist))
    lam2 = lam.copy()
    lam2[1] += 0.5
    ok = (phi_exact(PhiQuery(lam2, 1, 2, dist)) < base_i - 1e-6
          and phi_exact(PhiQuery(lam2, 3, 2, dist)) >= base_j - 1e-9)
    out.append(CheckResult("phi-monotonicity", ok, "raising lambda_i lowers phi_i, raises phi_j"))

    # decomposition identity, paired (exact) and independent (within noise)
    rep = check_decomposition(lam, i=1, j=3, m_tilde=2, dist=dist, n=200_000, rng=rng)
    ok_paired = rep.residual == 0.0
    rep_ind = check_decomposition(lam, i=1, j=3, m_tilde=2, dist=dist, n=200_000,
                                  rng=rng, paired=False)
    ok_ind = abs(rep_ind.residual) <= 3.0 * rep_ind.residual_se
    out.append(CheckResult("rank-decomposition", ok_paired and ok_ind,
                           f"paired residual {rep.residual:.1e}, "
                           f"independent z = {abs(rep_ind.residual) / max(rep_ind.residual_se, 1e-12):.2f}"))

    # top-m expectation bound
    ok = True
    detail = ""
    for dist in _dists():
        for d, m in ((4, 1), (4, 2), (16, 4)):
            est, bound = topm_expectation_bound(dist, d, m, 200_000, rng)
            if est > bound:
                ok = False
                detail = f"{dist.kind} a={dist.alpha} d={d} m={m}: {est:.3f} > {bound:.3f}"
    out.append(CheckResult("topm-sum-bound", ok, detail or "MC estimate below bound everywhere"))
    return out


def format_report(report: list[CheckResult]) -> str:
    lines = []
    for item in report:
        lines.append(f"[{'PASS' if item.passed else 'FAIL'}] {item.name}: {item.detail}")
    n_fail = sum(1 for item in report if not item.passed)
    lines.append(f"{len(report) - n_fail}/{len(report)} oracle checks passed")
    return "\n".join(lines)
