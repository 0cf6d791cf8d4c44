# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: torus pair sums and interval sup-ratio scans."""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, pow, sqrt


def pair_sum_power(const double[:, ::1] values, const double[:, ::1] weights,
                   const long[::1] out_i, const long[::1] out_j,
                   const long[::1] in_i, const long[::1] in_j, double p):
    """Sum of |f(x)-f(y)|^p * W[y-x] over outer x and inner y node lists.

    weights is indexed by the wrapped lattice offset, weights[0, 0] must be 0
    so the diagonal drops out.
    """
    cdef Py_ssize_t n1 = values.shape[0]
    cdef Py_ssize_t n2 = values.shape[1]
    cdef Py_ssize_t no = out_i.shape[0]
    cdef Py_ssize_t ni = in_i.shape[0]
    cdef Py_ssize_t a, b
    cdef long di, dj, oi, oj
    cdef double acc = 0.0
    cdef double fo, d
    cdef int mode = 0
    if p == 2.0:
        mode = 2
    elif p == 3.0:
        mode = 3
    elif p == 1.5:
        mode = 1
    with nogil:
        for a in range(no):
            oi = out_i[a]
            oj = out_j[a]
            fo = values[oi, oj]
            for b in range(ni):
                di = in_i[b] - oi
                if di < 0:
                    di += n1
                dj = in_j[b] - oj
                if dj < 0:
                    dj += n2
                d = fabs(values[in_i[b], in_j[b]] - fo)
                if mode == 3:
                    acc += d * d * d * weights[di, dj]
                elif mode == 2:
                    acc += d * d * weights[di, dj]
                elif mode == 1:
                    acc += d * sqrt(d) * weights[di, dj]
                else:
                    if d > 0.0:
                        acc += pow(d, p) * weights[di, dj]
    return acc


def interval_sup_ratios(const double[:, ::1] pts, double dx, double t, double p,
                        const long[::1] starts, const long[::1] lengths):
    """Per candidate interval [start, start+length), the max over sample pairs
    of |f(a)-f(b)|^p / ((b-a)*dx)^t. pts has one row per sample."""
    cdef Py_ssize_t ncand = starts.shape[0]
    cdef Py_ssize_t m = pts.shape[1]
    cdef Py_ssize_t c, a, b, k
    cdef long s, w
    cdef double best, d2, diff, num, den
    out = np.zeros(ncand, dtype=np.float64)
    cdef double[::1] ov = out
    with nogil:
        for c in range(ncand):
            s = starts[c]
            w = lengths[c]
            best = 0.0
            for a in range(s, s + w):
                for b in range(a + 1, s + w):
                    d2 = 0.0
                    for k in range(m):
                        diff = pts[a, k] - pts[b, k]
                        d2 += diff * diff
                    num = pow(sqrt(d2), p)
                    den = pow((b - a) * dx, t)
                    if num / den > best:
                        best = num / den
            ov[c] = best
    return out
