"""NumPy fallback for the float-mode convolution kernels.

Score atoms in float mode are keyed by their log-score rounded onto a
fixed grid and stored as int64 grid indices, so convolving two
distributions adds keys with exact integer arithmetic.  Infinite scores
use saturating sentinel keys far outside the reachable finite range;
sums involving one sentinel are clamped back to the sentinel, and the
opposite-sentinel sum lands on a finite key with provably zero mass,
which the zero filter removes.

The compiled twin (``_convkernel_c``) implements the same contract; the
two must agree to the last bit on identical inputs.
"""

from __future__ import annotations

import numpy as np

NAME = "numpy"

#: int64 sentinel for +inf scores; -POS_KEY is the -inf sentinel.
POS_KEY = 1 << 61
NEG_KEY = -POS_KEY
#: keys beyond this magnitude are saturated sums involving a sentinel.
CLAMP = 1 << 60


def convolve_pairs(keys_a, w1_a, w0_a, keys_b, w1_b, w0_b, prune_eps=0.0):
    """Convolve two key-sorted atom arrays.

    Returns ``(keys, w1, w0, pruned_w1, pruned_w0)`` with keys sorted
    ascending, zero-mass atoms removed, and atoms whose both masses fall
    below ``prune_eps`` dropped into the pruned totals.
    """
    s = (keys_a[:, None] + keys_b[None, :]).ravel()
    w1 = (w1_a[:, None] * w1_b[None, :]).ravel()
    w0 = (w0_a[:, None] * w0_b[None, :]).ravel()

    s = np.where(s > CLAMP, POS_KEY, s)
    s = np.where(s < -CLAMP, NEG_KEY, s)

    keys, inv = np.unique(s, return_inverse=True)
    m1 = np.bincount(inv, weights=w1, minlength=len(keys))
    m0 = np.bincount(inv, weights=w0, minlength=len(keys))

    keep = (m1 > 0.0) | (m0 > 0.0)
    keys, m1, m0 = keys[keep], m1[keep], m0[keep]

    pruned_w1 = pruned_w0 = 0.0
    if prune_eps > 0.0:
        drop = (m1 < prune_eps) & (m0 < prune_eps)
        if drop.any():
            pruned_w1 = float(m1[drop].sum())
            pruned_w0 = float(m0[drop].sum())
            keys, m1, m0 = keys[~drop], m1[~drop], m0[~drop]

    return keys, m1, m0, pruned_w1, pruned_w0


def auc_sorted(w1, w0):
    """Rank statistic of two mass vectors aligned on ascending scores.

    Computes ``sum_i w1[i] * sum_{j<i} w0[j] + 0.5 * sum_i w1[i] w0[i]``.
    """
    c0 = np.cumsum(w0)
    below = c0 - w0
    return float(np.dot(w1, below) + 0.5 * np.dot(w1, w0))
