# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``_convkernel_py``.

Same contract and the same per-key accumulation order as the fallback
(stable sort keeps equal keys in pair-enumeration order, matching
``np.bincount``), so convolution outputs are bit-identical across
backends; the AUC pass may differ from the fallback by float summation
order only.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

NAME = "cython"

cdef long long POS_KEY_C = (<long long> 1) << 61
cdef long long CLAMP_C = (<long long> 1) << 60

POS_KEY = POS_KEY_C
NEG_KEY = -POS_KEY_C
CLAMP = CLAMP_C


def convolve_pairs(keys_a, w1_a, w0_a, keys_b, w1_b, w0_b, double prune_eps=0.0):
    """Convolve two key-sorted atom arrays; see the fallback for the contract."""
    cdef long long[::1] ka = np.ascontiguousarray(keys_a, dtype=np.int64)
    cdef long long[::1] kb = np.ascontiguousarray(keys_b, dtype=np.int64)
    cdef double[::1] a1 = np.ascontiguousarray(w1_a, dtype=np.float64)
    cdef double[::1] a0 = np.ascontiguousarray(w0_a, dtype=np.float64)
    cdef double[::1] b1 = np.ascontiguousarray(w1_b, dtype=np.float64)
    cdef double[::1] b0 = np.ascontiguousarray(w0_b, dtype=np.float64)

    cdef Py_ssize_t na = ka.shape[0]
    cdef Py_ssize_t nb = kb.shape[0]
    cdef Py_ssize_t n = na * nb

    pair_keys = np.empty(n, dtype=np.int64)
    pair_w1 = np.empty(n, dtype=np.float64)
    pair_w0 = np.empty(n, dtype=np.float64)
    cdef long long[::1] pk = pair_keys
    cdef double[::1] p1 = pair_w1
    cdef double[::1] p0 = pair_w0

    cdef Py_ssize_t i, j, t
    cdef long long k, kai
    cdef double wa1, wa0
    t = 0
    for i in range(na):
        kai = ka[i]
        wa1 = a1[i]
        wa0 = a0[i]
        for j in range(nb):
            k = kai + kb[j]
            if k > CLAMP_C:
                k = POS_KEY_C
            elif k < -CLAMP_C:
                k = -POS_KEY_C
            pk[t] = k
            p1[t] = wa1 * b1[j]
            p0[t] = wa0 * b0[j]
            t += 1

    order = np.argsort(pair_keys, kind="stable")
    cdef cnp.intp_t[::1] idx = order

    merged_keys = np.empty(n, dtype=np.int64)
    merged_w1 = np.zeros(n, dtype=np.float64)
    merged_w0 = np.zeros(n, dtype=np.float64)
    cdef long long[::1] mk = merged_keys
    cdef double[::1] m1 = merged_w1
    cdef double[::1] m0 = merged_w0

    cdef Py_ssize_t out = -1
    cdef long long prev = 0
    cdef Py_ssize_t src
    for t in range(n):
        src = idx[t]
        k = pk[src]
        if out < 0 or k != prev:
            out += 1
            mk[out] = k
            prev = k
        m1[out] += p1[src]
        m0[out] += p0[src]
    cdef Py_ssize_t n_merged = out + 1

    merged_keys = merged_keys[:n_merged]
    merged_w1 = merged_w1[:n_merged]
    merged_w0 = merged_w0[:n_merged]

    keep = (merged_w1 > 0.0) | (merged_w0 > 0.0)
    merged_keys = merged_keys[keep]
    merged_w1 = merged_w1[keep]
    merged_w0 = merged_w0[keep]

    cdef double pruned_w1 = 0.0
    cdef double pruned_w0 = 0.0
    if prune_eps > 0.0:
        drop = (merged_w1 < prune_eps) & (merged_w0 < prune_eps)
        if drop.any():
            pruned_w1 = float(merged_w1[drop].sum())
            pruned_w0 = float(merged_w0[drop].sum())
            merged_keys = merged_keys[~drop]
            merged_w1 = merged_w1[~drop]
            merged_w0 = merged_w0[~drop]

    return merged_keys, merged_w1, merged_w0, pruned_w1, pruned_w0


def auc_sorted(w1, w0):
    """Rank statistic of two mass vectors aligned on ascending scores."""
    cdef double[::1] m1 = np.ascontiguousarray(w1, dtype=np.float64)
    cdef double[::1] m0 = np.ascontiguousarray(w0, dtype=np.float64)
    cdef Py_ssize_t n = m1.shape[0]
    cdef Py_ssize_t i
    cdef double below = 0.0
    cdef double total = 0.0
    for i in range(n):
        total += m1[i] * below + 0.5 * m1[i] * m0[i]
        below += m0[i]
    return total
