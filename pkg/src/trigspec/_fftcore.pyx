# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled radix-2 FFT and trigonometric series kernels."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, floor, fabs, M_PI

cnp.import_array()


def transform(v, bint inverse):
    """Unnormalised in-place radix-2 DIT transform on a copy of ``v``."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a = np.array(v, dtype=np.complex128)
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j, k, bit, half, span, start, stride
    cdef double complex t, u, w
    cdef double sgn = 1.0 if inverse else -1.0
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] tw = np.empty(n // 2 if n > 1 else 1,
                                                          dtype=np.complex128)

    # bit-reversal permutation
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            t = a[i]
            a[i] = a[j]
            a[j] = t

    for k in range(n // 2):
        tw[k] = cos(2.0 * M_PI * k / n) + 1j * sgn * sin(2.0 * M_PI * k / n)

    half = 1
    while half < n:
        span = half << 1
        stride = n // span
        for start in range(0, n, span):
            for k in range(half):
                w = tw[k * stride]
                u = a[start + k]
                t = a[start + k + half] * w
                a[start + k] = u + t
                a[start + k + half] = u - t
        half = span
    return a


cdef enum:
    BLOCK = 4


def series_turns(coef, w_hi, w_lo, int order, bint odd):
    """Compiled twin of ``_fft_py.series_turns``.

    The phase of every ``BLOCK``-th term is reduced exactly and passed to
    cos/sin; the terms in between are reached by rotating through the
    single-step angle, so rounding drift never spans more than one block.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=1] c = np.ascontiguousarray(coef, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] wh = np.ascontiguousarray(w_hi, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] wl = np.ascontiguousarray(w_lo, dtype=np.float64)
    cdef Py_ssize_t m = c.shape[0], p = wh.shape[0], i, j, j0, jend
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(p)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sc = np.empty(m)
    cdef int quarter = (order + 3 * odd) % 4
    cdef bint use_sin = quarter % 2
    cdef double sign = -1.0 if (quarter == 1 or quarter == 2) else 1.0
    cdef double acc, comp, term, tmp, w, w1, w2, u, cs, sn, cj, sj, t
    cdef double two_pi = 2.0 * M_PI
    for j in range(m):
        sc[j] = c[j] * (<double>j) ** order if order else c[j]
    for i in range(p):
        w = wh[i] - floor(wh[i])
        w1 = floor(w * 1073741824.0) / 1073741824.0
        w2 = w - w1 + wl[i]
        cs = cos(two_pi * (w1 + w2))
        sn = sin(two_pi * (w1 + w2))
        acc = 0.0
        comp = 0.0
        j0 = 0
        while j0 < m:
            u = w1 * j0
            u -= floor(u)
            u += w2 * j0
            u -= floor(u)
            cj = cos(two_pi * u)
            sj = sin(two_pi * u)
            jend = j0 + BLOCK if j0 + BLOCK < m else m
            for j in range(j0, jend):
                term = sc[j] * (sj if use_sin else cj)
                # Neumaier compensated sum
                tmp = acc + term
                if fabs(acc) >= fabs(term):
                    comp += (acc - tmp) + term
                else:
                    comp += (term - tmp) + acc
                acc = tmp
                t = cj * cs - sj * sn
                sj = sj * cs + cj * sn
                cj = t
            j0 = jend
        out[i] = sign * (acc + comp)
    return out
