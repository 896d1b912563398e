"""Top-m argmin over perturbed scores and the ascending-rank statistic.

A single global tie-break rule (ascending base-arm index) is used everywhere
so that `top_m_argmin(x, m)` always equals `{i : ranks(x)[i] <= m}`.  The
conditional resampling loop relies on this consistency.
"""

from __future__ import annotations

import numpy as np

from .core import Action

# sigma vector: permutation of 1..d, ascending rank with index tie-break
RankVector = np.ndarray


def top_m_mask(scores: np.ndarray, m: int) -> np.ndarray:
    """Boolean mask of the m smallest entries, ties broken by ascending index.

    Expected O(d) via introselect partition; no full sort.
    """
    d = scores.shape[0]
    if not 1 <= m <= d:
        raise ValueError(f"m must lie in [1, {d}], got {m}")
    kth = np.partition(scores, m - 1)[m - 1]
    mask = scores <= kth
    extra = int(mask.sum()) - m
    if extra > 0:
        # more ties at the threshold than slots: keep the lowest-index ones
        ties = np.flatnonzero(scores == kth)
        mask[ties[ties.size - extra:]] = False
    return mask


def top_m_argmin(scores, m: int) -> Action:
    """Indices of the m smallest scores (the argmin action over all m-sets)."""
    scores = np.asarray(scores, dtype=np.float64)
    if not np.all(np.isfinite(scores)):
        raise ValueError("scores must be finite")
    return Action(tuple(int(i) for i in np.flatnonzero(top_m_mask(scores, m))))


def ranks(l_hat) -> RankVector:
    """Ascending 1-based ranks of l_hat, ties broken by ascending index.

    sigma[i] == 1 for the current loss leader; equivalently the descending
    rank of -l_hat.  O(d log d), recomputed once per round off the
    resampling hot path.
    """
    l_hat = np.asarray(l_hat, dtype=np.float64)
    if not np.all(np.isfinite(l_hat)):
        raise ValueError("l_hat must be finite")
    d = l_hat.shape[0]
    order = np.lexsort((np.arange(d), l_hat))
    sigma = np.empty(d, dtype=np.int64)
    sigma[order] = np.arange(1, d + 1)
    return sigma


def rank_membership(scores: np.ndarray, i: int, m: int, lower_index_mask: np.ndarray) -> bool:
    """Whether arm i is among the m smallest scores, same tie-break as
    `top_m_mask`, in O(d) without selection.

    `lower_index_mask` must be the precomputed boolean array (arange(d) < i).
    """
    s_i = scores[i]
    n_better = int((scores < s_i).sum()) + int(((scores == s_i) & lower_index_mask).sum())
    return n_better <= m - 1
