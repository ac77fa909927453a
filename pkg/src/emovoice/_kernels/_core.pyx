# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: polyphase resampler inner loop and Goertzel band
energy. Mirrors _fallback.py exactly; see that module for the contracts."""

from libc.math cimport cos, M_PI

import numpy as np
cimport numpy as cnp

cnp.import_array()


def poly_resample(double[::1] xpad, double[:, ::1] phases, long down, long center, long n_out):
    cdef long n_phases = phases.shape[0]
    cdef long n_taps = phases.shape[1]
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n_out, dtype=np.float64)
    cdef double[::1] ov = out
    cdef long m, q, k0, r, base, j
    cdef double acc
    for m in range(n_out):
        q = m * down + center
        k0 = q / n_phases
        r = q - k0 * n_phases
        base = k0 + n_taps
        acc = 0.0
        for j in range(n_taps):
            acc += phases[r, j] * xpad[base - j]
        ov[m] = acc
    return out


def band_power_pair(double[::1] x, long k_lo, long k_hi):
    cdef long n = x.shape[0]
    cdef long i, k
    cdef double total = 0.0
    for i in range(n):
        total += x[i] * x[i]
    if total == 0.0 or k_hi < k_lo:
        return total, 0.0
    cdef double band = 0.0
    cdef double coeff, s, s_prev, s_prev2
    for k in range(k_lo, k_hi + 1):
        coeff = 2.0 * cos(2.0 * M_PI * k / n)
        s_prev = 0.0
        s_prev2 = 0.0
        for i in range(n):
            s = x[i] + coeff * s_prev - s_prev2
            s_prev2 = s_prev
            s_prev = s
        band += s_prev * s_prev + s_prev2 * s_prev2 - coeff * s_prev * s_prev2
    band = 2.0 * band / n
    return total, band
