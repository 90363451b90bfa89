"""Pure-Python (numpy/scipy) fallback for the hot kernels.

The variance recursion sigma2[t] = c[t] + beta * sigma2[t-1] is a linear
IIR filter in sigma2, so `scipy.signal.lfilter` runs it at C speed without
a compiled extension of our own. Results agree with the compiled kernels
to floating rounding.
"""

import numpy as np
from scipy.signal import lfilter

NAME = "python"

_LOG_2PI = np.log(2.0 * np.pi)


def sigma2_path(y, alpha, beta, omega, lam, sigma2_init):
    """Conditional variance path driven by `y`, seeded with `sigma2_init`."""
    y = np.asarray(y, dtype=np.float64)
    n = y.shape[0]
    if n == 1:
        return np.array([sigma2_init], dtype=np.float64)
    yl = y[:-1]
    c = omega + (alpha + lam * (yl < 0.0)) * (yl * yl)
    tail, _ = lfilter([1.0], [1.0, -beta], c, zi=np.array([beta * sigma2_init]))
    out = np.empty(n, dtype=np.float64)
    out[0] = sigma2_init
    out[1:] = tail
    return out


def log_likelihood(y, alpha, beta, omega, lam, sigma2_init):
    """Sum of per-observation normal log densities, computed in log space."""
    y = np.asarray(y, dtype=np.float64)
    s2 = sigma2_path(y, alpha, beta, omega, lam, sigma2_init)
    return float(-0.5 * (y.shape[0] * _LOG_2PI + np.sum(np.log(s2) + y * y / s2)))
