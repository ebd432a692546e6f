# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops. Signatures mirror ``_pykernels`` exactly."""

import numpy as np

from libc.math cimport cos, log, sin, sqrt


def zeta_main_sums(double[::1] t, long long[::1] nterms):
    """Return sum_{n=1}^{N_i - 1} n**(-1/2 - i t_i) for each i, in double precision."""
    cdef Py_ssize_t m = t.shape[0]
    cdef Py_ssize_t i, n
    cdef double ti, lg, a, re, im
    out = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] o = out
    for i in range(m):
        ti = t[i]
        re = 0.0
        im = 0.0
        for n in range(1, nterms[i]):
            lg = log(<double>n)
            a = 1.0 / sqrt(<double>n)
            re += a * cos(ti * lg)
            im -= a * sin(ti * lg)
        o[i] = re + 1j * im
    return out


def half_sums(long long[::1] values):
    """All 3**h signed sums of ``values``; digit j of the index (base 3) minus 1 is the coefficient."""
    cdef Py_ssize_t h = values.shape[0]
    cdef Py_ssize_t size = 1
    cdef Py_ssize_t j, i
    for j in range(h):
        size *= 3
    out = np.zeros(size, dtype=np.int64)
    cdef long long[::1] o = out
    cdef Py_ssize_t filled = 1
    cdef long long v
    for j in range(h):
        v = values[j]
        for i in range(filled):
            o[filled + i] = o[i]
            o[2 * filled + i] = o[i] + v
            o[i] = o[i] - v
        filled *= 3
    return out


cdef inline long long _absll(long long x):
    return -x if x < 0 else x


def closest_pair(long long[::1] a_sorted, long long[::1] b, long long skip_a, long long skip_b):
    """Minimise |a + b| over pairs; the pair (skip_a, skip_b) is excluded.

    ``a_sorted`` must be ascending. Returns (best, ia, jb) with ia indexing ``a_sorted``.
    """
    cdef Py_ssize_t na = a_sorted.shape[0]
    cdef Py_ssize_t nb = b.shape[0]
    cdef Py_ssize_t j, lo, hi, mid, c
    cdef long long target, val, best = -1
    cdef Py_ssize_t best_i = -1, best_j = -1
    for j in range(nb):
        target = -b[j]
        lo = 0
        hi = na
        while lo < hi:
            mid = (lo + hi) >> 1
            if a_sorted[mid] < target:
                lo = mid + 1
            else:
                hi = mid
        for c in range(lo - 2, lo + 2):
            if c < 0 or c >= na:
                continue
            if c == skip_a and j == skip_b:
                continue
            val = _absll(a_sorted[c] + b[j])
            if best < 0 or val < best:
                best = val
                best_i = c
                best_j = j
    return best, best_i, best_j


def pairs_within(long long[::1] a_sorted, long long[::1] b, long long bound):
    """All (ia, jb) with |a_sorted[ia] + b[jb]| <= bound."""
    cdef Py_ssize_t na = a_sorted.shape[0]
    cdef Py_ssize_t nb = b.shape[0]
    cdef Py_ssize_t j, lo, hi, mid, c
    cdef long long target
    out_i = []
    out_j = []
    for j in range(nb):
        target = -b[j] - bound
        lo = 0
        hi = na
        while lo < hi:
            mid = (lo + hi) >> 1
            if a_sorted[mid] < target:
                lo = mid + 1
            else:
                hi = mid
        c = lo
        while c < na and a_sorted[c] <= -b[j] + bound:
            out_i.append(c)
            out_j.append(j)
            c += 1
    return np.asarray(out_i, dtype=np.int64), np.asarray(out_j, dtype=np.int64)
