# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: sieve, completely multiplicative extension, divisor sums
and compensated Dirichlet partial sums."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, cos, sin, sqrt, fabs

cnp.import_array()

NAME = "cython"


def lpf_sieve(Py_ssize_t limit):
    cdef cnp.ndarray[cnp.int64_t, ndim=1] arr = np.zeros(limit + 1, dtype=np.int64)
    cdef cnp.int64_t[::1] lpf = arr
    cdef Py_ssize_t p, m
    p = 2
    while p * p <= limit:
        if lpf[p] == 0:
            m = p * p
            while m <= limit:
                if lpf[m] == 0:
                    lpf[m] = p
                m += p
        p += 1
    for m in range(2, limit + 1):
        if lpf[m] == 0:
            lpf[m] = m
    if limit >= 1:
        lpf[1] = 1
    return arr


def extend_multiplicative(const cnp.int64_t[::1] lpf, const double complex[::1] prime_values, Py_ssize_t n):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] arr = np.empty(n + 1, dtype=np.complex128)
    cdef double complex[::1] out = arr
    cdef Py_ssize_t k, p
    out[0] = 0
    if n >= 1:
        out[1] = 1
    for k in range(2, n + 1):
        p = lpf[k]
        out[k] = prime_values[p] * out[k // p]
    return arr


def extend_additive(const cnp.int64_t[::1] lpf, const double[::1] prime_values, Py_ssize_t n):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] arr = np.zeros(n + 1, dtype=np.float64)
    cdef double[::1] out = arr
    cdef Py_ssize_t k, p
    for k in range(2, n + 1):
        p = lpf[k]
        out[k] = prime_values[p] + out[k // p]
    return arr


def prime_power_base(const cnp.int64_t[::1] lpf, Py_ssize_t n):
    cdef cnp.ndarray[cnp.int64_t, ndim=1] arr = np.zeros(n + 1, dtype=np.int64)
    cdef cnp.int64_t[::1] base = arr
    cdef Py_ssize_t k, p, q
    for k in range(2, n + 1):
        p = lpf[k]
        q = k // p
        if q == 1 or base[q] == p:
            base[k] = p
    return arr


def divisor_sums(const double[::1] weights, Py_ssize_t n):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] arr = np.zeros(n + 1, dtype=np.float64)
    cdef double[::1] out = arr
    cdef Py_ssize_t d, m
    cdef double w
    for d in range(1, n + 1):
        w = weights[d]
        if w != 0.0:
            m = d
            while m <= n:
                out[m] += w
                m += d
    return arr


cdef inline void _neumaier(double x, double* acc, double* comp) nogil:
    cdef double t = acc[0] + x
    if fabs(acc[0]) >= fabs(x):
        comp[0] += (acc[0] - t) + x
    else:
        comp[0] += (x - t) + acc[0]
    acc[0] = t


def dirichlet_sum(const double complex[::1] coeffs, const double[::1] logb, s, Py_ssize_t start, Py_ssize_t stop):
    cdef double complex sc = complex(s)
    cdef double sr = sc.real, si = sc.imag
    cdef double re = 0.0, rc = 0.0, im = 0.0, ic = 0.0
    cdef double mag, ang, cr, ci, tr, ti
    cdef Py_ssize_t k
    for k in range(start, stop):
        cr = coeffs[k].real
        ci = coeffs[k].imag
        if cr == 0.0 and ci == 0.0:
            continue
        mag = exp(-sr * logb[k])
        if si == 0.0:
            tr = mag
            ti = 0.0
        else:
            ang = -si * logb[k]
            tr = mag * cos(ang)
            ti = mag * sin(ang)
        _neumaier(cr * tr - ci * ti, &re, &rc)
        _neumaier(cr * ti + ci * tr, &im, &ic)
    return complex(re + rc, im + ic)
