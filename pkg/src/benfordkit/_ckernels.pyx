# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops: harmonic exponential sums and the one-sample KS statistic."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos

cnp.import_array()

DEF BLOCK = 256


def harmonic_sums(const double[::1] x, double t0, Py_ssize_t n_max, Py_ssize_t n_start=1):
    """Return ``sum_j exp(1j * n * t0 * x[j])`` for ``n = n_start .. n_start + n_max - 1``.

    Samples are processed in blocks: one sin/cos pair per sample, then each
    harmonic is a complex multiply over the block, which the compiler can
    vectorise because samples within a block are independent.
    """
    cdef Py_ssize_t m = x.shape[0]
    cdef Py_ssize_t lo, j, k, nb
    cdef double c1[BLOCK]
    cdef double s1[BLOCK]
    cdef double wc[BLOCK]
    cdef double ws[BLOCK]
    cdef double tmp, arg, r0, r1, r2, r3, i0, i1, i2, i3
    acc_re_arr = np.zeros(n_max, dtype=np.float64)
    acc_im_arr = np.zeros(n_max, dtype=np.float64)
    cdef double[::1] acc_re = acc_re_arr
    cdef double[::1] acc_im = acc_im_arr
    with nogil:
        lo = 0
        while lo < m:
            nb = m - lo
            if nb > BLOCK:
                nb = BLOCK
            for j in range(nb):
                arg = t0 * x[lo + j]
                c1[j] = cos(arg)
                s1[j] = sin(arg)
                if n_start == 1:
                    wc[j] = c1[j]
                    ws[j] = s1[j]
                else:
                    wc[j] = cos(n_start * arg)
                    ws[j] = sin(n_start * arg)
            for j in range(nb, BLOCK):
                c1[j] = 1.0
                s1[j] = 0.0
                wc[j] = 0.0
                ws[j] = 0.0
            for k in range(n_max):
                r0 = r1 = r2 = r3 = 0.0
                i0 = i1 = i2 = i3 = 0.0
                for j in range(0, BLOCK, 4):
                    r0 += wc[j]
                    r1 += wc[j + 1]
                    r2 += wc[j + 2]
                    r3 += wc[j + 3]
                    i0 += ws[j]
                    i1 += ws[j + 1]
                    i2 += ws[j + 2]
                    i3 += ws[j + 3]
                acc_re[k] += (r0 + r1) + (r2 + r3)
                acc_im[k] += (i0 + i1) + (i2 + i3)
                for j in range(BLOCK):
                    tmp = wc[j] * c1[j] - ws[j] * s1[j]
                    ws[j] = wc[j] * s1[j] + ws[j] * c1[j]
                    wc[j] = tmp
            lo += nb
    return acc_re_arr + 1j * acc_im_arr


def ks_uniform_sorted(const double[::1] u):
    """Exact sup-distance between the empirical CDF of sorted ``u`` and ``F(t) = t``."""
    cdef Py_ssize_t m = u.shape[0]
    cdef Py_ssize_t i
    cdef double d = 0.0, hi, lo, fm = <double>m
    with nogil:
        for i in range(m):
            hi = (i + 1) / fm - u[i]
            lo = u[i] - i / fm
            if hi > d:
                d = hi
            if lo > d:
                d = lo
    return d
