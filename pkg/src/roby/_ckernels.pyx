# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernel backend.

Parallelism is across classes / pairs only: each output slot is accumulated
serially in canonical record order by exactly one thread, so results are
bit-identical for any thread count (and identical to a serial run).
"""

from cython.parallel import prange
from libc.math cimport fabs, pow, sqrt

import numpy as np

cdef enum:
    _KIND_GENERAL = 0
    _KIND_P1 = 1
    _KIND_P2 = 2
    _KIND_INF = 3

KIND_GENERAL = _KIND_GENERAL
KIND_P1 = _KIND_P1
KIND_P2 = _KIND_P2
KIND_INF = _KIND_INF


cdef double _row_distance(const double *a, const double *b, Py_ssize_t m,
                          int kind, double p) noexcept nogil:
    cdef Py_ssize_t i
    cdef double acc = 0.0
    cdef double d
    cdef double mx = 0.0
    if kind == _KIND_P1:
        for i in range(m):
            acc += fabs(a[i] - b[i])
        return acc
    if kind == _KIND_P2:
        for i in range(m):
            d = a[i] - b[i]
            acc += d * d
        return sqrt(acc)
    if kind == _KIND_INF:
        for i in range(m):
            d = fabs(a[i] - b[i])
            if d > mx:
                mx = d
        return mx
    # general finite p, max-factored against overflow
    for i in range(m):
        d = fabs(a[i] - b[i])
        if d > mx:
            mx = d
    if mx == 0.0:
        return 0.0
    for i in range(m):
        acc += pow(fabs(a[i] - b[i]) / mx, p)
    return mx * pow(acc, 1.0 / p)


cdef void _center_one(const double[:, ::1] vectors, long long start, long long stop,
                      double[:, ::1] out, Py_ssize_t k) noexcept nogil:
    cdef Py_ssize_t r, c
    cdef Py_ssize_t m = vectors.shape[1]
    cdef double n = <double> (stop - start)
    for r in range(start, stop):
        for c in range(m):
            out[k, c] += vectors[r, c]
    for c in range(m):
        out[k, c] /= n


cdef double _fsa_one(const double[:, ::1] vectors, long long start, long long stop,
                     const double[:, ::1] centers, Py_ssize_t k,
                     int kind, double p) noexcept nogil:
    cdef Py_ssize_t r
    cdef double acc = 0.0
    cdef Py_ssize_t m = vectors.shape[1]
    for r in range(start, stop):
        acc += _row_distance(&vectors[r, 0], &centers[k, 0], m, kind, p)
    return acc / <double> (stop - start)


def class_centers(const double[:, ::1] vectors, const long long[::1] offsets, int threads):
    cdef Py_ssize_t num_classes = offsets.shape[0] - 1
    out_arr = np.zeros((num_classes, vectors.shape[1]), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t k
    for k in prange(num_classes, nogil=True, schedule="static", num_threads=threads):
        _center_one(vectors, offsets[k], offsets[k + 1], out, k)
    return out_arr


def fsa_raw(const double[:, ::1] vectors, const long long[::1] offsets,
            const double[:, ::1] centers, int kind, double p, int threads):
    cdef Py_ssize_t num_classes = offsets.shape[0] - 1
    out_arr = np.empty(num_classes, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k
    for k in prange(num_classes, nogil=True, schedule="static", num_threads=threads):
        out[k] = _fsa_one(vectors, offsets[k], offsets[k + 1], centers, k, kind, p)
    return out_arr


def pair_distances(const double[:, ::1] centers, const long long[::1] ii,
                   const long long[::1] jj, int kind, double p, int threads):
    cdef Py_ssize_t num_pairs = ii.shape[0]
    cdef Py_ssize_t m = centers.shape[1]
    out_arr = np.empty(num_pairs, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t t
    for t in prange(num_pairs, nogil=True, schedule="static", num_threads=threads):
        out[t] = _row_distance(&centers[ii[t], 0], &centers[jj[t], 0], m, kind, p)
    return out_arr
