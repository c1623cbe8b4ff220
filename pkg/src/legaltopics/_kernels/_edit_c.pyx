# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Levenshtein alignment-count kernel."""

import numpy as np

cimport numpy as cnp


def edit_counts_kernel(ref, hyp):
    """(S, D, I) from a minimal unit-cost alignment; backtrace prefers
    match/substitution, then deletion, then insertion."""
    cdef cnp.int64_t[::1] r = np.ascontiguousarray(ref, dtype=np.int64)
    cdef cnp.int64_t[::1] h = np.ascontiguousarray(hyp, dtype=np.int64)
    cdef Py_ssize_t m = r.shape[0]
    cdef Py_ssize_t n = h.shape[0]
    cdef cnp.int32_t[:, ::1] dist = np.empty((m + 1, n + 1), dtype=np.int32)
    cdef Py_ssize_t i, j
    cdef int cost, best, cand

    for j in range(n + 1):
        dist[0, j] = <int> j
    for i in range(1, m + 1):
        dist[i, 0] = <int> i
        for j in range(1, n + 1):
            cost = 0 if r[i - 1] == h[j - 1] else 1
            best = dist[i - 1, j - 1] + cost
            cand = dist[i - 1, j] + 1
            if cand < best:
                best = cand
            cand = dist[i, j - 1] + 1
            if cand < best:
                best = cand
            dist[i, j] = best

    cdef int subs = 0, dels = 0, ins = 0
    i = m
    j = n
    while i > 0 or j > 0:
        if i > 0 and j > 0:
            cost = 0 if r[i - 1] == h[j - 1] else 1
            if dist[i - 1, j - 1] + cost == dist[i, j]:
                subs += cost
                i -= 1
                j -= 1
                continue
        if i > 0 and dist[i - 1, j] + 1 == dist[i, j]:
            dels += 1
            i -= 1
            continue
        ins += 1
        j -= 1
    return subs, dels, ins
