import numpy as np
import pytest
from math import gamma, pi, sqrt

from ftpl_mset.core import derive_trial_rng
from ftpl_mset.oracle import (
    PhiQuery,
    check_decomposition,
    phi_exact,
    phi_mc,
    topm_expectation_bound,
    topm_sum_bound,
)
from ftpl_mset.perturbation import frechet, pareto

ALPHAS = (1.5, 2.0, 3.0)


def all_dists():
    return [frechet(a) for a in ALPHAS] + [pareto(a) for a in ALPHAS]


@pytest.mark.parametrize("dist", all_dists(), ids=lambda d: f"{d.kind}-{d.alpha}")
def test_phi_exact_symmetric_cases(dist):
    assert phi_exact(PhiQuery(np.zeros(2), 0, 1, dist)) == pytest.approx(0.5, abs=1e-7)
    assert phi_exact(PhiQuery(np.zeros(3), 1, 2, dist)) == pytest.approx(2 / 3, abs=1e-7)


def test_phi_exact_full_subset_is_one():
    dist = frechet(2.0)
    lam = np.array([0.0, 1.0, 2.0])
    assert phi_exact(PhiQuery(lam, 1, 3, dist)) == 1.0


def test_phi_normalisation_random_configs():
    rng = derive_trial_rng(61, 0)
    for k in range(6):
        dist = all_dists()[k]
        d = int(rng.integers(4, 8))
        m = int(rng.integers(1, d))
        lam = rng.random(d) * 2.0
        total = sum(phi_exact(PhiQuery(lam, i, m, dist)) for i in range(d))
        assert abs(total - m) < 1e-6


def test_phi_exact_vs_mc_agreement():
    # >= 20 random configurations across both kinds and all alphas
    rng = derive_trial_rng(61, 1)
    configs = 0
    for rep in range(4):
        for dist in all_dists():
            d = int(rng.integers(4, 8))
            m = int(rng.integers(1, d))
            lam = rng.random(d) * 2.5
            i = int(rng.integers(0, d))
            exact = phi_exact(PhiQuery(lam, i, m, dist))
            est, se = phi_mc(PhiQuery(lam, i, m, dist), 100_000, rng)
            assert abs(est - exact) < 3 * max(se, 1e-6), (dist, lam, i, m)
            configs += 1
    assert configs == 24


def test_phi_mc_full_subset_exact_one():
    dist = pareto(2.0)
    lam = np.array([0.5, 1.5, 0.1, 0.9])
    sub = np.array([0, 2, 3])
    est, se = phi_mc(PhiQuery(lam, 2, 3, dist, subset=sub), 1_000, derive_trial_rng(61, 2))
    assert est == 1.0 and se == pytest.approx(0.0, abs=1e-6)


def test_phi_mc_symmetric():
    dist = frechet(2.0)
    est, se = phi_mc(PhiQuery(np.zeros(4), 2, 2, dist), 100_000, derive_trial_rng(61, 3))
    assert abs(est - 0.5) < 3 * se


def test_phi_monotonicity_grid():
    dist = frechet(2.0)
    lam = np.array([0.0, 0.4, 0.8, 1.2, 1.6])
    for bump in (0.3, 0.8, 1.5):
        lam2 = lam.copy()
        lam2[1] += bump
        # raising lambda_1 strictly lowers phi_1 ...
        assert phi_exact(PhiQuery(lam2, 1, 2, dist)) < phi_exact(PhiQuery(lam, 1, 2, dist)) - 1e-7
        # ... and weakly raises every other phi_j
        for j in (0, 2, 3, 4):
            assert (phi_exact(PhiQuery(lam2, j, 2, dist))
                    >= phi_exact(PhiQuery(lam, j, 2, dist)) - 1e-9)


def test_decomposition_paired_residual_is_zero():
    dist = frechet(2.0)
    lam = np.array([0.0, 0.3, 0.6, 0.9, 1.2, 1.5])
    rep = check_decomposition(lam, i=1, j=4, m_tilde=3, dist=dist, n=100_000,
                              rng=derive_trial_rng(61, 4))
    assert rep.paired
    assert rep.residual == 0.0
    assert rep.residual_se == 0.0


def test_decomposition_independent_within_noise():
    dist = pareto(2.0)
    lam = np.array([0.0, 0.3, 0.6, 0.9, 1.2, 1.5])
    rep = check_decomposition(lam, i=2, j=5, m_tilde=2, dist=dist, n=100_000,
                              rng=derive_trial_rng(61, 5), paired=False)
    assert abs(rep.residual) < 3 * rep.residual_se
    assert rep.phi_full == pytest.approx(rep.phi_reduced + rep.phi_boundary,
                                         abs=4 * rep.residual_se)


def test_decomposition_m_tilde_one_empty_convention():
    # with m_tilde = 1 the reduced term is the empty event: rank <= 0
    dist = frechet(2.0)
    lam = np.array([0.0, 0.5, 1.0, 1.5])
    rep = check_decomposition(lam, i=0, j=2, m_tilde=1, dist=dist, n=50_000,
                              rng=derive_trial_rng(61, 6))
    assert rep.phi_reduced == 0.0
    assert rep.residual == 0.0


def test_decomposition_matches_phi_exact_terms():
    # cross-check the paired frequencies against quadrature values
    dist = frechet(2.0)
    lam = np.array([0.0, 0.3, 0.6, 0.9, 1.2, 1.5])
    n = 200_000
    rep = check_decomposition(lam, i=1, j=4, m_tilde=2, dist=dist, n=n,
                              rng=derive_trial_rng(61, 7))
    full = phi_exact(PhiQuery(lam, 1, 2, dist))
    reduced = phi_exact(PhiQuery(lam, 1, 1, dist, subset=np.array([0, 1, 2, 3, 5])))
    se = np.sqrt(0.25 / n)
    assert abs(rep.phi_full - full) < 3.5 * se
    assert abs(rep.phi_reduced - reduced) < 3.5 * se


def test_topm_bound_closed_form_value():
    # Pareto alpha=2, d=4, m=2: (2 + sqrt(pi)) * sqrt(5)
    expect = (2.0 + sqrt(pi)) * sqrt(5.0)
    assert topm_sum_bound(pareto(2.0), 4, 2) == pytest.approx(expect, rel=1e-15)
    assert topm_sum_bound(frechet(2.0), 4, 2) == pytest.approx(expect + 2.0, rel=1e-15)


def test_topm_bound_m1_reduction():
    for a in ALPHAS:
        expect = gamma(1 - 1 / a) * 5 ** (1 / a)
        assert topm_sum_bound(pareto(a), 4, 1) == pytest.approx(expect, rel=1e-14)
        assert topm_sum_bound(frechet(a), 4, 1) == pytest.approx(expect + 1.0, rel=1e-14)


def test_topm_mc_below_bound():
    rng = derive_trial_rng(61, 8)
    est, bound = topm_expectation_bound(pareto(2.0), 4, 2, 1_000_000, rng)
    assert est < bound
    # exact mean from the order-statistics formula: 24/Gamma(4.5) * (G(0.5) + G(1.5))
    exact = gamma(5) / gamma(4.5) * (gamma(0.5) / gamma(1) + gamma(1.5) / gamma(2))
    assert est == pytest.approx(exact, rel=0.02)


def test_phi_query_validation():
    dist = frechet(2.0)
    with pytest.raises(ValueError):
        phi_exact(PhiQuery(np.zeros(4), 0, 5, dist))
    with pytest.raises(ValueError):
        phi_exact(PhiQuery(np.zeros(4), 2, 1, dist, subset=np.array([0, 1])))
