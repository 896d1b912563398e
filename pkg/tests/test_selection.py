import numpy as np
import pytest

from ftpl_mset.core import derive_trial_rng
from ftpl_mset.selection import rank_membership, ranks, top_m_argmin, top_m_mask


def brute_ranks(x):
    """Independent oracle: sigma[i] = |{j: x_j < x_i}| + |{j <= i: x_j = x_i}|."""
    x = np.asarray(x)
    return np.array([
        int((x < x[i]).sum()) + int((x[: i + 1] == x[i]).sum())
        for i in range(len(x))
    ])


def brute_top_m(x, m):
    """Independent oracle: stable full sort, take the first m indices."""
    order = np.argsort(np.asarray(x), kind="stable")
    return tuple(sorted(int(i) for i in order[:m]))


def test_top_m_argmin_examples():
    assert top_m_argmin([3, 1, 2, 0], 2).indices == (1, 3)
    assert top_m_argmin([5, 5, 5], 2).indices == (0, 1)  # index tie-break


def test_top_m_argmin_matches_sort_oracle():
    rng = derive_trial_rng(21, 0)
    for _ in range(50):
        x = rng.random(50)
        assert top_m_argmin(x, 3).indices == brute_top_m(x, 3)


def test_top_m_argmin_ties_match_sort_oracle():
    rng = derive_trial_rng(21, 1)
    for _ in range(200):
        x = rng.integers(0, 4, 12).astype(float)  # heavy ties
        m = int(rng.integers(1, 12))
        assert top_m_argmin(x, m).indices == brute_top_m(x, m)


def test_top_m_argmin_rejects_nonfinite():
    with pytest.raises(ValueError):
        top_m_argmin([0.0, np.nan], 1)


def test_ranks_examples():
    assert ranks([0.5, 0.2, 0.2, 0.9]).tolist() == [3, 1, 2, 4]
    assert ranks(np.zeros(5)).tolist() == [1, 2, 3, 4, 5]


def test_ranks_matches_brute_force():
    rng = derive_trial_rng(22, 0)
    x = rng.random(100)
    sigma = ranks(x)
    assert sigma.tolist() == brute_ranks(x).tolist()
    assert int((sigma == 1).sum()) == 1
    assert sigma[np.argmin(x)] == 1
    assert sorted(sigma) == list(range(1, 101))


def test_ranks_is_permutation_with_ties():
    rng = derive_trial_rng(22, 1)
    for _ in range(50):
        x = rng.integers(0, 3, 10).astype(float)
        sigma = ranks(x)
        assert sorted(sigma) == list(range(1, 11))
        assert sigma.tolist() == brute_ranks(x).tolist()


def test_selection_rank_consistency():
    # top_m_argmin(x, m) == {i : ranks(x)[i] <= m} under the shared tie-break
    rng = derive_trial_rng(23, 0)
    for _ in range(100):
        x = rng.integers(0, 5, 9).astype(float)
        m = int(rng.integers(1, 9))
        sigma = ranks(x)
        assert set(top_m_argmin(x, m)) == {i for i in range(9) if sigma[i] <= m}


def test_selection_does_not_mutate_input():
    x = np.array([3.0, 1.0, 2.0, 0.0])
    snapshot = x.copy()
    top_m_argmin(x, 2)
    top_m_mask(x, 2)
    assert np.array_equal(x, snapshot)


def test_rank_membership_matches_mask():
    rng = derive_trial_rng(23, 1)
    d = 11
    idx = np.arange(d)
    for _ in range(100):
        x = rng.integers(0, 4, d).astype(float)
        m = int(rng.integers(1, d))
        mask = top_m_mask(x, m)
        for i in range(d):
            assert rank_membership(x, i, m, idx < i) == bool(mask[i])
