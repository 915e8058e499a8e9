"""Pure-Python (numpy) implementations of the hot kernels.

Every function here has a twin in ``_ckernels.pyx`` with the same signature
and the same results up to floating-point summation order.
"""
import math

import numpy as np

NAME = "python"


def lpf_sieve(limit):
    """Least-prime-factor table for 0..limit; entry 1 is 1, entry 0 is 0."""
    lpf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if lpf[p] == 0:
            seg = lpf[p * p :: p]
            seg[seg == 0] = p
    idx = np.arange(limit + 1, dtype=np.int64)
    unset = lpf == 0
    lpf[unset] = idx[unset]
    lpf[1] = 1
    lpf[0] = 0
    return lpf


def _peel(lpf, n):
    # repeatedly strip the least prime factor; yields (active prime, mask)
    m = np.arange(n + 1, dtype=np.int64)
    m[0] = 1
    while True:
        p = lpf[m]
        live = m > 1
        if not live.any():
            return
        yield p, live
        m[live] //= p[live]


def extend_multiplicative(lpf, prime_values, n):
    out = np.ones(n + 1, dtype=np.complex128)
    for p, live in _peel(lpf, n):
        out[live] *= prime_values[p[live]]
    out[0] = 0.0
    return out


def extend_additive(lpf, prime_values, n):
    out = np.zeros(n + 1, dtype=np.float64)
    for p, live in _peel(lpf, n):
        out[live] += prime_values[p[live]]
    out[0] = 0.0
    return out


def prime_power_base(lpf, n):
    idx = np.arange(n + 1, dtype=np.int64)
    p = lpf[: n + 1].copy()
    p[:2] = 1
    m = idx.copy()
    m[:2] = 0
    while True:
        hit = (m > 1) & (m % p == 0)
        if not hit.any():
            break
        m[hit] //= p[hit]
    base = np.where(m == 1, p, 0)
    base[:2] = 0
    return base.astype(np.int64)


def divisor_sums(weights, n):
    out = np.zeros(n + 1, dtype=np.float64)
    for d in np.flatnonzero(weights[: n + 1]):
        if d == 0:
            continue
        out[d::d] += weights[d]
    return out


def dirichlet_sum(coeffs, logb, s, start, stop):
    c = coeffs[start:stop]
    lb = logb[start:stop]
    nz = c != 0
    if not nz.any():
        return 0j
    return complex(np.sum(c[nz] * np.exp(-complex(s) * lb[nz])))
