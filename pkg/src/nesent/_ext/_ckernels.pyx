# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the routines in ``_pykernels``; same arithmetic order."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef double RESCALE_BELOW = 1e-6


def pegasos_train(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices,
                  const double[::1] y, const cnp.int64_t[::1] order,
                  double reg, Py_ssize_t dim):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v_arr = np.zeros(dim, dtype=np.float64)
    cdef double[::1] v = v_arr
    cdef double scale = 1.0, eta, dot, score, label, coef
    cdef Py_ssize_t step, k, j, lo, hi, row
    cdef double t = 0.0
    for step in range(order.shape[0]):
        row = order[step]
        t += 1.0
        eta = 1.0 / (reg * t)
        lo = indptr[row]
        hi = indptr[row + 1]
        dot = 0.0
        for k in range(lo, hi):
            dot += v[indices[k]]
        score = scale * dot
        scale = scale * (1.0 - 1.0 / t)
        if scale == 0.0:
            for j in range(dim):
                v[j] = 0.0
            scale = 1.0
        label = y[row]
        if label * score < 1.0:
            coef = eta * label / scale
            for k in range(lo, hi):
                v[indices[k]] += coef
        if scale < RESCALE_BELOW:
            for j in range(dim):
                v[j] = v[j] * scale
            scale = 1.0
    for j in range(dim):
        v[j] = v[j] * scale
    return v_arr


def sparse_margins(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices,
                   const double[::1] w, double bias):
    cdef Py_ssize_t nrows = indptr.shape[0] - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_arr = np.empty(nrows, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t r, k
    cdef double acc
    for r in range(nrows):
        acc = 0.0
        for k in range(indptr[r], indptr[r + 1]):
            acc += w[indices[k]]
        out[r] = acc + bias
    return out_arr
