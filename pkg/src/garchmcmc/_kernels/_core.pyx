# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: the GJR-GARCH volatility recursion and its
Gaussian log-likelihood, fused into single C loops.

These are evaluated once per MCMC step (hundreds of thousands of times per
run), so they carry the entire runtime. Inputs are assumed pre-validated by
the callers in `garchmcmc.model`.
"""

from libc.math cimport log

import numpy as np

cdef double LOG_2PI = log(2.0 * 3.14159265358979323846)

NAME = "compiled"


def sigma2_path(double[::1] y, double alpha, double beta, double omega,
                double lam, double sigma2_init):
    """Conditional variance path driven by `y`, seeded with `sigma2_init`."""
    cdef Py_ssize_t n = y.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t t
    cdef double s2 = sigma2_init
    cdef double yp, ysq, coeff
    with nogil:
        out[0] = s2
        for t in range(1, n):
            yp = y[t - 1]
            ysq = yp * yp
            coeff = alpha + (lam if yp < 0.0 else 0.0)
            s2 = omega + coeff * ysq + beta * s2
            out[t] = s2
    return out_arr


def log_likelihood(double[::1] y, double alpha, double beta, double omega,
                   double lam, double sigma2_init):
    """Sum of per-observation normal log densities, computed in log space."""
    cdef Py_ssize_t n = y.shape[0]
    cdef Py_ssize_t t
    cdef double s2 = sigma2_init
    cdef double acc = 0.0
    cdef double yp, ysq, coeff
    with nogil:
        acc = log(s2) + y[0] * y[0] / s2
        for t in range(1, n):
            yp = y[t - 1]
            ysq = yp * yp
            coeff = alpha + (lam if yp < 0.0 else 0.0)
            s2 = omega + coeff * ysq + beta * s2
            acc += log(s2) + y[t] * y[t] / s2
    return -0.5 * (n * LOG_2PI + acc)
