# cython: language_level=3
"""Compiled twins of the numpy quadrature kernels (see _kernels_np.py).

Same contracts, same alternating-point weights, sequential loops.  Kept
single-threaded so INTERFACE_DYN_THREADS=1 semantics hold trivially; the
O(N^2) work per call is small enough that BLAS-free loops already win on
memory traffic for the matrix-free paths.
"""
import numpy as np

cimport cython
from libc.math cimport cos, cosh, fabs, sin, sinh, sqrt

from .errors import CurveDegenerate

cdef double PI = 3.141592653589793238462643383279502884


@cython.boundscheck(False)
@cython.wraparound(False)
def br_build_closed(double[:] x, double[:] y, double h):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t j, k
    cdef double dx, dy, r2, scale = h / PI
    m1_arr = np.zeros((n, n))
    m2_arr = np.zeros((n, n))
    cdef double[:, ::1] m1 = m1_arr
    cdef double[:, ::1] m2 = m2_arr
    for j in range(n):
        for k in range(1 - (j & 1), n, 2):
            dx = x[j] - x[k]
            dy = y[j] - y[k]
            r2 = dx * dx + dy * dy
            if r2 == 0.0:
                raise CurveDegenerate("coincident nodes in plane-kernel quadrature")
            m1[j, k] = scale * (-dy) / r2
            m2[j, k] = scale * dx / r2
    return m1_arr, m2_arr


@cython.boundscheck(False)
@cython.wraparound(False)
def br_build_periodic(double[:] x, double[:] y, double h):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t j, k
    cdef double w1, w2, den, scale = h / (2.0 * PI)
    m1_arr = np.zeros((n, n))
    m2_arr = np.zeros((n, n))
    cdef double[:, ::1] m1 = m1_arr
    cdef double[:, ::1] m2 = m2_arr
    for j in range(n):
        for k in range(1 - (j & 1), n, 2):
            w1 = x[j] - x[k]
            w2 = y[j] - y[k]
            den = cosh(w2) - cos(w1)
            if den == 0.0:
                raise CurveDegenerate("coincident nodes in periodic-kernel quadrature")
            m1[j, k] = scale * (-sinh(w2)) / den
            m2[j, k] = scale * sin(w1) / den
    return m1_arr, m2_arr


@cython.boundscheck(False)
@cython.wraparound(False)
def corr_closed(double[:] x, double[:] y, double[:] xt, double[:] yt,
                double[:] u, double h):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t j, k
    cdef double dx, dy, dxt, dyt, r2, dot, s1, s2, scale = h / PI
    v1_arr = np.empty(n)
    v2_arr = np.empty(n)
    cdef double[::1] v1 = v1_arr
    cdef double[::1] v2 = v2_arr
    for j in range(n):
        s1 = 0.0
        s2 = 0.0
        for k in range(1 - (j & 1), n, 2):
            dx = x[j] - x[k]
            dy = y[j] - y[k]
            dxt = xt[j] - xt[k]
            dyt = yt[j] - yt[k]
            r2 = dx * dx + dy * dy
            if r2 == 0.0:
                raise CurveDegenerate("coincident nodes in plane-kernel quadrature")
            dot = dx * dxt + dy * dyt
            s1 += (-dyt / r2 + 2.0 * dy * dot / (r2 * r2)) * u[k]
            s2 += (dxt / r2 - 2.0 * dx * dot / (r2 * r2)) * u[k]
        v1[j] = scale * s1
        v2[j] = scale * s2
    return v1_arr, v2_arr


@cython.boundscheck(False)
@cython.wraparound(False)
def corr_periodic(double[:] x, double[:] y, double[:] xt, double[:] yt,
                  double[:] u, double h):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t j, k
    cdef double w1, w2, dxt, dyt, p, q, r, s1, s2, scale = h / (2.0 * PI)
    v1_arr = np.empty(n)
    v2_arr = np.empty(n)
    cdef double[::1] v1 = v1_arr
    cdef double[::1] v2 = v2_arr
    for j in range(n):
        s1 = 0.0
        s2 = 0.0
        for k in range(1 - (j & 1), n, 2):
            w1 = x[j] - x[k]
            w2 = y[j] - y[k]
            dxt = xt[j] - xt[k]
            dyt = yt[j] - yt[k]
            p = 1.0 - cos(w1) * cosh(w2)
            q = sin(w1) * sinh(w2)
            r = p * p + q * q
            if r == 0.0:
                raise CurveDegenerate("coincident nodes in periodic-kernel quadrature")
            s1 += (-(dyt * p - dxt * q) / r) * u[k]
            s2 += (-(dxt * p + dyt * q) / r) * u[k]
        v1[j] = scale * s1
        v2[j] = scale * s2
    return v1_arr, v2_arr


cdef inline double _wrap(double d):
    cdef double beta = d
    while beta > PI:
        beta -= 2.0 * PI
    while beta <= -PI:
        beta += 2.0 * PI
    return beta


@cython.boundscheck(False)
@cython.wraparound(False)
def chord_scan_closed(double[:] x, double[:] y, double[:] nodes):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t j, k
    cdef double beta, dx, dy, d2, ratio
    cdef double max_ratio = 0.0
    cdef double min_d2 = -1.0
    for j in range(n):
        for k in range(n):
            if j == k:
                continue
            beta = _wrap(nodes[j] - nodes[k])
            dx = x[j] - x[k]
            dy = y[j] - y[k]
            d2 = dx * dx + dy * dy
            if d2 == 0.0:
                return float("inf"), 0.0
            if min_d2 < 0.0 or d2 < min_d2:
                min_d2 = d2
            ratio = fabs(beta) / sqrt(d2)
            if ratio > max_ratio:
                max_ratio = ratio
    return max_ratio, sqrt(min_d2)


@cython.boundscheck(False)
@cython.wraparound(False)
def chord_scan_periodic(double[:] px, double[:] py, double[:] nodes):
    cdef Py_ssize_t n = px.shape[0]
    cdef Py_ssize_t j, k
    cdef double beta, dx, dy, d2, ratio
    cdef double max_ratio = 0.0
    cdef double min_d2 = -1.0
    for j in range(n):
        for k in range(n):
            if j == k:
                continue
            beta = _wrap(nodes[j] - nodes[k])
            dx = beta + px[j] - px[k]
            dy = py[j] - py[k]
            d2 = dx * dx + dy * dy
            if d2 == 0.0:
                return float("inf"), 0.0
            if min_d2 < 0.0 or d2 < min_d2:
                min_d2 = d2
            ratio = fabs(beta) / sqrt(d2)
            if ratio > max_ratio:
                max_ratio = ratio
    return max_ratio, sqrt(min_d2)
