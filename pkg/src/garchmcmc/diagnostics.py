"""Chain statistics: autocorrelation function, integrated autocorrelation
time with a self-consistent truncation window, inefficiency factor 2*tau,
posterior mean/SD/SE and per-window acceptance traces.

Conventions, fixed for reproducibility:

* ACF(t) normalizes the lag-t sum over the N-t overlapping pairs by 1/N
  (not 1/(N-t)), so ACF(0) = 1 exactly and late lags are slightly damped.
  An unbiased 1/(N-t) variant sits behind a flag.
* tau = 1/2 + sum_{i<=W} ACF(i) with W the smallest lag satisfying
  W >= c*tau(W), c = 6. A chain whose correlation time is comparable to its
  length has no such window and raises WindowNotFound.
* tau uncertainty comes from a delete-one-block jackknife over 20
  contiguous blocks.
* SE = SD * sqrt(2*tau / N): the error of the chain mean inflated by the
  inefficiency factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import fft as _fft

from .exceptions import ConstantSeries, WindowNotFound
from .model import PARAM_NAMES, _FLOAT_FMT
from .samplers import Chain

_WINDOW_FACTOR = 6.0
_JACKKNIFE_BLOCKS = 20
_ACCEPTANCE_WINDOW = 1000


def _centered_autocov_sums(x: np.ndarray) -> np.ndarray:
    """c[t] = sum_{j} (x_j - mean)(x_{j+t} - mean) for t = 0..N-1, via FFT."""
    xc = x - x.mean()
    nfft = _fft.next_fast_len(2 * xc.size)
    f = _fft.rfft(xc, nfft)
    return _fft.irfft(f * np.conj(f), nfft)[: xc.size]


def acf(series, max_lag: int, unbiased: bool = False) -> np.ndarray:
    """Autocorrelation function at lags 0..max_lag.

    Literal convention: the lag-t cross sum is divided by N and by the
    full-series (1/N) variance, so acf[0] == 1. With `unbiased` the cross
    sum is divided by N-t instead.
    """
    x = np.asarray(series, dtype=np.float64)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("series must be 1-d with at least 2 values")
    if not 0 <= max_lag < x.size:
        raise ValueError("max_lag must satisfy 0 <= max_lag < len(series)")
    if np.all(x == x[0]):
        raise ConstantSeries("series is constant; ACF undefined")
    c = _centered_autocov_sums(x)[: max_lag + 1]
    rho = c / c[0]
    if unbiased:
        n = x.size
        rho = rho * (n / (n - np.arange(max_lag + 1.0)))
    return rho


def _tau_self_consistent(x: np.ndarray, c_factor: float) -> float:
    """tau truncated at the smallest window W with W >= c_factor * tau(W)."""
    n = x.size
    half = n // 2
    cov = _centered_autocov_sums(x)
    if cov[0] == 0.0:
        raise ConstantSeries("series is constant; tau undefined")
    rho = cov[: half + 1] / cov[0]
    taus = 0.5 + np.cumsum(rho[1:])
    lags = np.arange(1, half + 1)
    ok = lags >= c_factor * taus
    if not ok.any():
        raise WindowNotFound(
            f"no window W <= {half} satisfies W >= {c_factor}*tau(W); "
            "the chain is too short for its correlation time"
        )
    w = int(np.argmax(ok))
    return float(taus[w])


def act(series, c: float = _WINDOW_FACTOR, blocks: int = _JACKKNIFE_BLOCKS):
    """Integrated autocorrelation time and its jackknife uncertainty.

    Returns (tau, tau_err). tau_err is the delete-one-block jackknife
    standard error over `blocks` contiguous blocks, each replicate rerunning
    the full windowed estimate.
    """
    x = np.asarray(series, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("series must be 1-d")
    if x.size < 100:
        raise ValueError("need at least 100 points to estimate tau")
    if np.all(x == x[0]):
        raise ConstantSeries("series is constant; tau undefined")
    tau = _tau_self_consistent(x, c)
    edges = np.linspace(0, x.size, blocks + 1).astype(int)
    reps = np.empty(blocks)
    for k in range(blocks):
        trimmed = np.concatenate([x[: edges[k]], x[edges[k + 1]:]])
        reps[k] = _tau_self_consistent(trimmed, c)
    tau_err = float(np.sqrt((blocks - 1) / blocks * np.sum((reps - reps.mean()) ** 2)))
    return tau, tau_err


def acceptance_trace(accepted, window: int = _ACCEPTANCE_WINDOW) -> np.ndarray:
    """Acceptance fraction over consecutive full windows; shape (k, 2) with
    columns (window index, fraction). Trailing partial windows are dropped."""
    flags = np.asarray(accepted, dtype=float)
    k = flags.size // window
    out = np.empty((k, 2))
    out[:, 0] = np.arange(k)
    out[:, 1] = flags[: k * window].reshape(k, window).mean(axis=1)
    return out


@dataclass(frozen=True)
class ParamSummary:
    """Posterior summary of one parameter's chain."""

    mean: float
    sd: float
    se: float
    tau: float
    tau_err: float
    two_tau: float
    acf: np.ndarray | None
    error: str | None = None


@dataclass(frozen=True)
class DiagnosticsReport:
    """Per-parameter summaries plus the chain-level acceptance trace."""

    params: dict[str, ParamSummary]
    acceptance_trace: np.ndarray
    n: int
    kernel_tag: str


def summarize(chain: Chain, max_lag: int | None = None,
              window: int = _ACCEPTANCE_WINDOW) -> DiagnosticsReport:
    """Full diagnostics for a chain.

    A constant parameter series is reported (flagged) rather than fatal;
    the other parameters are still summarized.
    """
    k = len(chain)
    if k == 0:
        raise ValueError("chain is empty")
    if max_lag is None:
        max_lag = min(500, k // 10)
    summaries: dict[str, ParamSummary] = {}
    for j, name in enumerate(PARAM_NAMES):
        x = chain.draws[:, j]
        mean = float(x.mean())
        sd = float(x.std())
        try:
            tau, tau_err = act(x)
            rho = acf(x, max_lag)
        except ConstantSeries:
            summaries[name] = ParamSummary(
                mean=mean, sd=sd, se=float("nan"), tau=float("nan"),
                tau_err=float("nan"), two_tau=float("nan"), acf=None,
                error="constant series",
            )
            continue
        two_tau = 2.0 * tau
        se = sd * float(np.sqrt(two_tau / k))
        summaries[name] = ParamSummary(
            mean=mean, sd=sd, se=se, tau=tau, tau_err=tau_err,
            two_tau=two_tau, acf=rho,
        )
    return DiagnosticsReport(
        params=summaries,
        acceptance_trace=acceptance_trace(chain.accepted, window),
        n=k,
        kernel_tag=chain.kernel_tag,
    )


def report_text(report: DiagnosticsReport) -> str:
    """Plain key=value block per parameter."""
    blocks = []
    for name, s in report.params.items():
        lines = [f"param={name}", f"mean={s.mean:.10g}", f"sd={s.sd:.10g}"]
        if s.error is not None:
            lines.append(f"error={s.error}")
        else:
            lines += [
                f"se={s.se:.10g}",
                f"tau={s.tau:.10g}",
                f"tau_err={s.tau_err:.10g}",
                f"two_tau={s.two_tau:.10g}",
            ]
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def write_report(report: DiagnosticsReport, path) -> None:
    Path(path).write_text(report_text(report))


def write_acf_csv(rho: np.ndarray, path) -> None:
    lines = ["lag,acf"]
    lines += [f"{lag},{_FLOAT_FMT % v}" for lag, v in enumerate(rho)]
    Path(path).write_text("\n".join(lines) + "\n")


def write_acceptance_csv(trace: np.ndarray, path) -> None:
    lines = ["window,fraction"]
    lines += [f"{int(w)},{_FLOAT_FMT % f}" for w, f in trace]
    Path(path).write_text("\n".join(lines) + "\n")
