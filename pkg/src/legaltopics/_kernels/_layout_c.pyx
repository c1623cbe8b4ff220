# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled SGD layout kernel (same schedule and RNG as the Python fallback)."""

from libc.math cimport pow

import numpy as np

cimport numpy as cnp


cdef inline cnp.uint64_t _xorshift(cnp.uint64_t state) nogil:
    state ^= state << 13
    state ^= state >> 7
    state ^= state << 17
    return state


cdef inline double _clip4(double v) nogil:
    if v > 4.0:
        return 4.0
    if v < -4.0:
        return -4.0
    return v


def optimize_layout_kernel(cnp.float64_t[:, ::1] embedding,
                           heads_in, tails_in, eps_in,
                           int n_epochs, int n_vertices,
                           double a, double b, double gamma,
                           double initial_alpha, int negative_sample_rate,
                           unsigned long long seed):
    cdef cnp.int64_t[::1] heads = np.ascontiguousarray(heads_in, dtype=np.int64)
    cdef cnp.int64_t[::1] tails = np.ascontiguousarray(tails_in, dtype=np.int64)
    cdef cnp.float64_t[::1] eps = np.ascontiguousarray(eps_in, dtype=np.float64)
    cdef Py_ssize_t n_edges = heads.shape[0]
    cdef Py_ssize_t dim = embedding.shape[1]

    cdef cnp.float64_t[::1] epn = np.empty(n_edges, dtype=np.float64)
    cdef cnp.float64_t[::1] next_sample = np.empty(n_edges, dtype=np.float64)
    cdef cnp.float64_t[::1] next_neg = np.empty(n_edges, dtype=np.float64)
    cdef Py_ssize_t e, d, p
    for e in range(n_edges):
        epn[e] = eps[e] / negative_sample_rate
        next_sample[e] = eps[e]
        next_neg[e] = epn[e]

    cdef cnp.uint64_t state = <cnp.uint64_t> (seed | 1)
    cdef double alpha = initial_alpha
    cdef int epoch, n_neg
    cdef Py_ssize_t j, k, other
    cdef double d2, diff, coeff, g

    for epoch in range(n_epochs):
        for e in range(n_edges):
            if next_sample[e] > epoch:
                continue
            j = heads[e]
            k = tails[e]
            d2 = 0.0
            for d in range(dim):
                diff = embedding[j, d] - embedding[k, d]
                d2 += diff * diff
            if d2 > 0.0:
                coeff = (-2.0 * a * b * pow(d2, b - 1.0)) / (a * pow(d2, b) + 1.0)
            else:
                coeff = 0.0
            for d in range(dim):
                g = _clip4(coeff * (embedding[j, d] - embedding[k, d]))
                embedding[j, d] += alpha * g
                embedding[k, d] -= alpha * g
            next_sample[e] += eps[e]

            n_neg = <int> ((epoch - next_neg[e]) / epn[e])
            if n_neg < 0:
                n_neg = 0
            for p in range(n_neg):
                state = _xorshift(state)
                other = <Py_ssize_t> (state % <cnp.uint64_t> n_vertices)
                if other == j:
                    continue
                d2 = 0.0
                for d in range(dim):
                    diff = embedding[j, d] - embedding[other, d]
                    d2 += diff * diff
                if d2 > 0.0:
                    coeff = (2.0 * gamma * b) / ((0.001 + d2) * (a * pow(d2, b) + 1.0))
                else:
                    coeff = 0.0
                for d in range(dim):
                    if coeff > 0.0:
                        g = _clip4(coeff * (embedding[j, d] - embedding[other, d]))
                    else:
                        g = 4.0
                    embedding[j, d] += alpha * g
            next_neg[e] += n_neg * epn[e]
        alpha = initial_alpha * (1.0 - (epoch + 1.0) / n_epochs)
