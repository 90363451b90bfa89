"""Multivariate Student-t proposal: density, sampling, and moment-matched
construction from chain output.

The proposal density with location M, scale matrix Sigma and nu degrees of
freedom has covariance nu*Sigma/(nu-2), so a covariance estimate V taken
from chain draws maps to Sigma = V*(nu-2)/nu. The scheme re-estimates
(M, Sigma) from the accumulated draws at a fixed cadence; rebuild events are
recorded so the convergence of V can be plotted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import DegenerateCovariance
from .model import PARAM_NAMES, _FLOAT_FMT

# Diagonal jitter ladder tried when the raw scale matrix is not positive
# definite: eps * trace(V)/p added to the diagonal, escalating until
# factorization succeeds.
_JITTER_EPS = (1e-10, 1e-9, 1e-8, 1e-7, 1e-6)


@dataclass(frozen=True)
class ProposalSpec:
    """Frozen Student-t proposal: location M, SPD scale matrix Sigma,
    degrees of freedom nu > 2, with the Cholesky factor of Sigma cached.

    Arrays are stored read-only. The normalization constant of the log
    density is precomputed; evaluation then costs one forward substitution.
    """

    M: np.ndarray
    Sigma: np.ndarray
    nu: float
    chol: np.ndarray = field(init=False)
    _log_norm: float = field(init=False, repr=False)

    def __post_init__(self):
        M = np.array(self.M, dtype=np.float64)
        Sigma = np.array(self.Sigma, dtype=np.float64)
        if M.ndim != 1 or Sigma.shape != (M.size, M.size):
            raise ValueError("M must be a p-vector and Sigma a p-by-p matrix")
        if not self.nu > 2.0:
            raise ValueError("nu must exceed 2 (finite proposal covariance)")
        if np.max(np.abs(Sigma - Sigma.T)) > 1e-12:
            raise ValueError("Sigma must be symmetric to 1e-12")
        try:
            chol = np.linalg.cholesky(Sigma)
        except np.linalg.LinAlgError as exc:
            raise ValueError("Sigma is not positive definite") from exc
        tol = 1e-10 * max(1.0, float(np.max(np.abs(Sigma))))
        if np.max(np.abs(chol @ chol.T - Sigma)) > tol:
            raise ValueError("Cholesky factor does not reproduce Sigma")
        for arr in (M, Sigma, chol):
            arr.flags.writeable = False
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "Sigma", Sigma)
        object.__setattr__(self, "chol", chol)
        p = M.size
        nu = float(self.nu)
        log_det = 2.0 * float(np.sum(np.log(np.diag(chol))))
        object.__setattr__(
            self,
            "_log_norm",
            math.lgamma((nu + p) / 2.0)
            - math.lgamma(nu / 2.0)
            - 0.5 * log_det
            - (p / 2.0) * math.log(nu * math.pi),
        )

    @property
    def p(self) -> int:
        return self.M.size


def student_t_log_density(theta, spec: ProposalSpec) -> float:
    """Log density of the Student-t proposal at `theta`.

    The quadratic form (theta-M)' Sigma^-1 (theta-M) comes from forward
    substitution against the cached Cholesky factor; Sigma is never
    inverted explicitly.
    """
    d = np.asarray(theta, dtype=np.float64) - spec.M
    L = spec.chol
    p = spec.p
    qf = 0.0
    z = [0.0] * p
    for i in range(p):
        s = d[i]
        Li = L[i]
        for j in range(i):
            s -= Li[j] * z[j]
        zi = s / Li[i]
        z[i] = zi
        qf += zi * zi
    return spec._log_norm - 0.5 * (spec.nu + p) * math.log1p(qf / spec.nu)


def student_t_sample(spec: ProposalSpec, rng: np.random.Generator) -> np.ndarray:
    """One draw from the proposal: M + chol(Sigma) z sqrt(nu/w) with
    z ~ N(0, I) and w ~ chi-squared(nu).

    The draw is returned raw; whether it lies in the model's parameter
    support is the sampler's concern.
    """
    z = rng.standard_normal(spec.p)
    w = rng.chisquare(spec.nu)
    return spec.M + (spec.chol @ z) * math.sqrt(spec.nu / w)


class MomentAccumulator:
    """Streaming mean and centered outer-product sum over chain draws.

    Welford-style updates with a symmetrized outer product, so the
    covariance it yields is symmetric by construction and the result is
    order-independent up to floating rounding. Single writer; cumulative
    over the whole run (never reset).
    """

    def __init__(self, p: int = 4):
        self.count = 0
        self.mean = np.zeros(p)
        self._m2 = np.zeros((p, p))

    def add(self, theta) -> None:
        x = np.asarray(theta, dtype=np.float64)
        self.count += 1
        delta = x - self.mean
        self.mean += delta / self.count
        delta2 = x - self.mean
        outer = np.outer(delta, delta2)
        self._m2 += 0.5 * (outer + outer.T)

    def covariance(self) -> np.ndarray:
        """Population covariance V (denominator = count)."""
        if self.count < 2:
            raise ValueError("need at least 2 accumulated points")
        return self._m2 / self.count


def build_spec(acc: MomentAccumulator, nu: float = 10.0) -> ProposalSpec:
    """Moment-matched proposal from accumulated draws: M = mean,
    Sigma = V*(nu-2)/nu with V the population covariance.

    Near-singular V gets escalating diagonal jitter before factorization
    is declared hopeless (DegenerateCovariance), which signals a collapsed
    chain.
    """
    if not nu > 2.0:
        raise ValueError("nu must exceed 2")
    V = acc.covariance()
    Sigma = V * (nu - 2.0) / nu
    p = Sigma.shape[0]
    scale = np.trace(V) / p
    jitter = 0.0
    for eps in (0.0,) + _JITTER_EPS:
        jitter = eps * scale
        try:
            return ProposalSpec(M=acc.mean, Sigma=Sigma + jitter * np.eye(p), nu=nu)
        except ValueError:
            continue
    raise DegenerateCovariance(
        "accumulated covariance is not positive definite even after jitter "
        f"(trace {np.trace(V)}); the chain may have collapsed to a point"
    )


@dataclass(frozen=True)
class ProposalUpdate:
    """One rebuild event: index, accumulated count, and the moments used."""

    update: int
    count: int
    M: np.ndarray
    V: np.ndarray


def write_proposal_history_csv(history, path) -> None:
    """One row per rebuild: update index, count, M (4 cols), V upper
    triangle (10 cols), row-major."""
    names = PARAM_NAMES
    cols = ["update", "count"]
    cols += [f"M_{n}" for n in names]
    cols += [f"V_{a}_{b}" for i, a in enumerate(names) for b in names[i:]]
    lines = [",".join(cols)]
    for h in history:
        vals = [str(h.update), str(h.count)]
        vals += [_FLOAT_FMT % v for v in h.M]
        vals += [_FLOAT_FMT % h.V[i, j] for i in range(4) for j in range(i, 4)]
        lines.append(",".join(vals))
    Path(path).write_text("\n".join(lines) + "\n")
