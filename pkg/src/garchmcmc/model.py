"""GJR-GARCH(1,1) process: parameters, volatility recursion, simulation,
log-likelihood and flat-prior log-posterior.

The model is

    y_t = sigma_t * eps_t,        eps_t ~ N(0, 1) i.i.d.
    sigma_t^2 = omega + alpha*y_{t-1}^2 + lam*1{y_{t-1}<0}*y_{t-1}^2
                + beta*sigma_{t-1}^2

with parameter vector theta = (alpha, beta, omega, lambda). The indicator
term raises volatility after negative observations (leverage effect).

All likelihood work happens in log space; the product form underflows for
realistic series lengths. The recursion itself runs in a selectable kernel
backend (compiled or numpy), see `garchmcmc._kernels`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from .exceptions import CsvFormatError, InvalidParams, PersistenceError

PARAM_NAMES = ("alpha", "beta", "omega", "lambda")

# Written CSV floats survive a parse round trip at this precision.
_FLOAT_FMT = "%.17g"


@dataclass(frozen=True)
class ParamVector:
    """The four GJR-GARCH parameters, in canonical (alpha, beta, omega,
    lambda) order.

    Support (the region where every sigma_t^2 is positive): omega > 0,
    alpha >= 0, beta >= 0, alpha + lam >= 0. Vectors outside the support
    are representable; posterior evaluation maps them to -inf.
    """

    alpha: float
    beta: float
    omega: float
    lam: float

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha, self.beta, self.omega, self.lam])

    @classmethod
    def from_array(cls, arr) -> "ParamVector":
        a, b, w, l = (float(v) for v in arr)
        return cls(a, b, w, l)

    def in_support(self) -> bool:
        return _in_support(self.alpha, self.beta, self.omega, self.lam)

    @property
    def persistence(self) -> float:
        return self.alpha + self.beta + 0.5 * self.lam


def _in_support(a: float, b: float, w: float, l: float) -> bool:
    return w > 0.0 and a >= 0.0 and b >= 0.0 and a + l >= 0.0


def _unpack(params) -> tuple[float, float, float, float]:
    """Accept a ParamVector or any length-4 sequence in canonical order."""
    if isinstance(params, ParamVector):
        return params.alpha, params.beta, params.omega, params.lam
    a, b, w, l = (float(v) for v in params)
    return a, b, w, l


def _require_support(a, b, w, l) -> None:
    if not _in_support(a, b, w, l):
        raise InvalidParams(
            f"parameters outside support (need omega>0, alpha>=0, beta>=0, "
            f"alpha+lambda>=0): alpha={a}, beta={b}, omega={w}, lambda={l}"
        )


@dataclass(frozen=True)
class ReturnSeries:
    """Observed series y_1..y_n, optionally with the simulated variance path."""

    y: np.ndarray
    sigma2_true: np.ndarray | None = None

    def __post_init__(self):
        y = np.ascontiguousarray(self.y, dtype=np.float64)
        object.__setattr__(self, "y", y)
        if y.ndim != 1 or y.size < 1:
            raise ValueError("y must be a 1-d series with at least one value")
        if not np.all(np.isfinite(y)):
            raise ValueError("y contains non-finite values")
        if self.sigma2_true is not None:
            s2 = np.ascontiguousarray(self.sigma2_true, dtype=np.float64)
            object.__setattr__(self, "sigma2_true", s2)
            if s2.shape != y.shape:
                raise ValueError("sigma2_true must match y in length")
            if not np.all(np.isfinite(s2)) or np.any(s2 <= 0):
                raise ValueError("sigma2_true entries must be finite and positive")

    def __len__(self) -> int:
        return self.y.size


@dataclass(frozen=True)
class VolatilityPath:
    """A realized sigma_t^2 path together with the seed used for sigma_1^2."""

    sigma2: np.ndarray
    sigma2_init: float


def unconditional_variance(params) -> float:
    """Stationary variance omega / (1 - alpha - beta - lambda/2).

    Raises PersistenceError when alpha + beta + lambda/2 >= 1.
    """
    a, b, w, l = _unpack(params)
    _require_support(a, b, w, l)
    p = a + b + 0.5 * l
    if p >= 1.0:
        raise PersistenceError(f"persistence {p} >= 1: unconditional variance undefined")
    return w / (1.0 - p)


def _resolve_sigma2_init(a, b, w, l, sigma2_init) -> float:
    if sigma2_init == "unconditional":
        p = a + b + 0.5 * l
        if p >= 1.0:
            raise PersistenceError(
                f"persistence {p} >= 1 with sigma2_init='unconditional'"
            )
        return w / (1.0 - p)
    s0 = float(sigma2_init)
    if not (s0 > 0.0):
        raise ValueError("sigma2_init must be positive")
    return s0


def volatility_path(params, y, sigma2_init: float = 1.0) -> VolatilityPath:
    """Run the variance recursion along an observed series.

    sigma2[0] = sigma2_init; later entries follow the GJR-GARCH recursion
    driven by y. `sigma2_init` may be the string "unconditional".
    """
    a, b, w, l = _unpack(params)
    _require_support(a, b, w, l)
    yarr = y.y if isinstance(y, ReturnSeries) else np.ascontiguousarray(y, dtype=np.float64)
    s0 = _resolve_sigma2_init(a, b, w, l, sigma2_init)
    return VolatilityPath(_kernels.sigma2_path(yarr, a, b, w, l, s0), s0)


def simulate(params, n: int, seed: int, sigma2_init="unconditional") -> ReturnSeries:
    """Generate n observations from the process with a seeded generator.

    Deterministic: identical (params, n, seed, sigma2_init) inputs produce
    bit-identical output.
    """
    a, b, w, l = _unpack(params)
    _require_support(a, b, w, l)
    if n < 1:
        raise ValueError("n must be >= 1")
    s0 = _resolve_sigma2_init(a, b, w, l, sigma2_init)
    rng = np.random.default_rng(seed)
    eps = rng.standard_normal(n)
    y = np.empty(n)
    s2 = np.empty(n)
    s2[0] = s0
    y[0] = math.sqrt(s0) * eps[0]
    for t in range(1, n):
        yp = y[t - 1]
        coeff = a + (l if yp < 0.0 else 0.0)
        s2[t] = w + coeff * (yp * yp) + b * s2[t - 1]
        y[t] = math.sqrt(s2[t]) * eps[t]
    return ReturnSeries(y=y, sigma2_true=s2)


def log_likelihood(params, y, sigma2_init="unconditional") -> float:
    """Gaussian log-likelihood of the series under `params`.

    Raises InvalidParams outside the support; use log_posterior for the
    soft (-inf) variant.
    """
    a, b, w, l = _unpack(params)
    _require_support(a, b, w, l)
    yarr = y.y if isinstance(y, ReturnSeries) else np.ascontiguousarray(y, dtype=np.float64)
    s0 = _resolve_sigma2_init(a, b, w, l, sigma2_init)
    return float(_kernels.log_likelihood(yarr, a, b, w, l, s0))


def make_log_posterior(y, sigma2_init="unconditional"):
    """Bind data into a fast flat-prior log-posterior over raw candidates.

    The returned callable maps a length-4 array (alpha, beta, omega, lambda)
    to the log posterior density up to a constant: the log-likelihood on the
    support, -inf outside. Under the default "unconditional" seeding policy,
    candidates with persistence >= 1 are also mapped to -inf, which rejects
    non-stationary proposals softly.
    """
    yarr = y.y if isinstance(y, ReturnSeries) else np.ascontiguousarray(y, dtype=np.float64)
    kernel = _kernels.log_likelihood
    if sigma2_init == "unconditional":

        def log_post(theta) -> float:
            a, b, w, l = theta
            if not (w > 0.0 and a >= 0.0 and b >= 0.0 and a + l >= 0.0):
                return -math.inf
            p = a + b + 0.5 * l
            if p >= 1.0:
                return -math.inf
            return kernel(yarr, a, b, w, l, w / (1.0 - p))

    else:
        s0 = float(sigma2_init)
        if not (s0 > 0.0):
            raise ValueError("sigma2_init must be positive")

        def log_post(theta) -> float:
            a, b, w, l = theta
            if not (w > 0.0 and a >= 0.0 and b >= 0.0 and a + l >= 0.0):
                return -math.inf
            return kernel(yarr, a, b, w, l, s0)

    return log_post


def log_posterior(params, y, sigma2_init="unconditional") -> float:
    """Flat-prior log-posterior; -inf for candidates outside the support.

    Total on raw candidates: never raises for out-of-support input.
    """
    a, b, w, l = _unpack(params)
    return make_log_posterior(y, sigma2_init)(np.array([a, b, w, l]))


def write_series_csv(series: ReturnSeries, path) -> None:
    """Write a series as CSV: header `y` or `y,sigma2_true`, one row per
    observation, full round-trip precision."""
    lines = []
    if series.sigma2_true is None:
        lines.append("y")
        for v in series.y:
            lines.append(_FLOAT_FMT % v)
    else:
        lines.append("y,sigma2_true")
        for v, s in zip(series.y, series.sigma2_true):
            lines.append((_FLOAT_FMT % v) + "," + (_FLOAT_FMT % s))
    Path(path).write_text("\n".join(lines) + "\n")


def read_series_csv(path) -> ReturnSeries:
    """Parse a series CSV written by `write_series_csv` (or any file with a
    `y` column and optional `sigma2_true`)."""
    with open(path) as fh:
        header = fh.readline().strip()
        if header == "y":
            with_sigma = False
        elif header == "y,sigma2_true":
            with_sigma = True
        else:
            raise CsvFormatError(
                f"expected header 'y' or 'y,sigma2_true', got {header!r}", line=1
            )
        ys: list[float] = []
        s2s: list[float] = []
        for lineno, raw in enumerate(fh, start=2):
            row = raw.strip()
            if not row:
                continue
            parts = row.split(",")
            if len(parts) != (2 if with_sigma else 1):
                raise CsvFormatError(
                    f"expected {2 if with_sigma else 1} columns, got {len(parts)}",
                    line=lineno,
                )
            try:
                ys.append(float(parts[0]))
                if with_sigma:
                    s2s.append(float(parts[1]))
            except ValueError as exc:
                raise CsvFormatError(f"non-numeric value in {row!r}", line=lineno) from exc
    if not ys:
        raise CsvFormatError("no observations in file", line=2)
    try:
        return ReturnSeries(
            y=np.array(ys), sigma2_true=np.array(s2s) if with_sigma else None
        )
    except ValueError as exc:
        raise CsvFormatError(str(exc)) from exc
