"""MCMC kernels and drivers: random-walk Metropolis, Student-t independence
Metropolis-Hastings, and the adaptive driver that schedules burn-in, moment
estimation and proposal rebuilds.

Both step kernels work on raw parameter arrays against an arbitrary
log-posterior callable (anything mapping a candidate vector to a log density,
-inf allowed), so the same machinery runs the GJR-GARCH posterior and the
analytic fixtures used to validate detailed balance. The drivers bind the
model posterior from a data series.

Acceptance tests and ratio arithmetic stay in log space throughout; nothing
is exponentiated before differencing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import ConstantSeries, CsvFormatError, GarchMcmcError, InvalidParams
from .model import PARAM_NAMES, _FLOAT_FMT, ParamVector, ReturnSeries, make_log_posterior
from .proposal import (
    MomentAccumulator,
    ProposalSpec,
    ProposalUpdate,
    build_spec,
    student_t_log_density,
    student_t_sample,
)

# Joint random-walk step widths for (alpha, beta, omega, lambda); chosen so
# the default experiment accepts well above 50%.
DEFAULT_D = (0.002, 0.02, 0.02, 0.01)


@dataclass(frozen=True)
class Chain:
    """Retained draws of one MCMC run with per-step acceptance flags."""

    draws: np.ndarray
    accepted: np.ndarray
    burn_in: int
    kernel_tag: str
    seed: int

    def __post_init__(self):
        draws = np.asarray(self.draws, dtype=np.float64)
        accepted = np.asarray(self.accepted, dtype=bool)
        if draws.ndim != 2 or draws.shape[1] != len(PARAM_NAMES):
            raise ValueError("draws must have shape (n, 4)")
        if accepted.shape != (draws.shape[0],):
            raise ValueError("accepted must match draws in length")
        object.__setattr__(self, "draws", draws)
        object.__setattr__(self, "accepted", accepted)

    def __len__(self) -> int:
        return self.draws.shape[0]

    def param(self, name: str) -> np.ndarray:
        return self.draws[:, PARAM_NAMES.index(name)]


@dataclass(frozen=True)
class AdaptiveConfig:
    """Schedule and tuning knobs for the samplers.

    `d` is the random-walk step-width vector; `theta_init` defaults to a
    moment-matched start derived from the data. `freeze_after` stops
    proposal rebuilds after that many post-initial rebuilds (None: never).
    `sigma2_init` is either "unconditional" or a fixed positive variance
    used to seed the recursion.
    """

    burn_in: int = 5000
    initial_pool: int = 1000
    rebuild_every: int = 1000
    retained: int = 100000
    nu: float = 10.0
    d: tuple[float, float, float, float] = DEFAULT_D
    theta_init: ParamVector | None = None
    seed: int = 0
    freeze_after: int | None = None
    sigma2_init: float | str = "unconditional"

    def __post_init__(self):
        if self.burn_in < 0 or self.retained < 0:
            raise ValueError("burn_in and retained must be non-negative")
        if self.initial_pool < 2:
            raise ValueError("initial_pool must be >= 2 (moment estimation)")
        if self.rebuild_every < 1:
            raise ValueError("rebuild_every must be >= 1")
        if not self.nu > 2.0:
            raise ValueError("nu must exceed 2")
        d = tuple(float(v) for v in self.d)
        if len(d) != 4 or any(v < 0 for v in d) or all(v == 0 for v in d):
            raise ValueError("d must be 4 non-negative widths, not all zero")
        object.__setattr__(self, "d", d)
        if self.freeze_after is not None and self.freeze_after < 0:
            raise ValueError("freeze_after must be non-negative")
        if self.theta_init is not None and not self.theta_init.in_support():
            raise InvalidParams("theta_init outside parameter support")


def metropolis_step(theta, d, log_post, rng, lp=None):
    """One random-walk Metropolis update.

    The candidate adds d_i*(r_i - 0.5) componentwise, r_i uniform on [0,1];
    it is accepted with probability min[1, exp(lp' - lp)]. Returns
    (state, accepted, state_log_posterior); the log posterior is threaded
    through so callers avoid re-evaluating it.
    """
    if lp is None:
        lp = float(log_post(theta))
    cand = theta + np.asarray(d) * (rng.random(len(theta)) - 0.5)
    cand_lp = float(log_post(cand))
    u = rng.random()
    log_u = math.log(u) if u > 0.0 else -math.inf
    if log_u < cand_lp - lp:
        return cand, True, cand_lp
    return theta, False, lp


def mh_independence_step(theta, spec: ProposalSpec, log_post, rng, lp=None, lg=None):
    """One independence MH update with the Student-t proposal.

    Acceptance probability min[1, exp((lp' - lp) + (lg - lg'))] where lg is
    the proposal log density; candidates with -inf posterior never pass.
    Returns (state, accepted, lp, lg) with the cached values for the
    returned state.
    """
    if lp is None:
        lp = float(log_post(theta))
    if lg is None:
        lg = student_t_log_density(theta, spec)
    cand = student_t_sample(spec, rng)
    cand_lp = float(log_post(cand))
    cand_lg = student_t_log_density(cand, spec)
    u = rng.random()
    log_u = math.log(u) if u > 0.0 else -math.inf
    if log_u < (cand_lp - lp) + (lg - cand_lg):
        return cand, True, cand_lp, cand_lg
    return theta, False, lp, lg


def default_theta_init(y) -> ParamVector:
    """Weakly informative start: modest ARCH/leverage terms and an intercept
    scaled to a tenth of the sample variance."""
    arr = y.y if isinstance(y, ReturnSeries) else np.asarray(y, dtype=np.float64)
    var = float(np.var(arr))
    if var == 0.0:
        raise ConstantSeries("input series has zero variance; cannot derive a start")
    return ParamVector(alpha=0.05, beta=0.80, omega=0.1 * var, lam=0.05)


def _start_state(config: AdaptiveConfig, y, log_post) -> tuple[np.ndarray, float]:
    theta0 = config.theta_init if config.theta_init is not None else default_theta_init(y)
    theta = theta0.as_array()
    lp = float(log_post(theta))
    if not math.isfinite(lp):
        raise InvalidParams(
            f"theta_init {theta0} has zero posterior density under the "
            "configured sigma2_init policy"
        )
    return theta, lp


def run_metropolis(config: AdaptiveConfig, y) -> Chain:
    """Random-walk Metropolis run: `burn_in` discarded steps, then
    `retained` recorded ones. Deterministic in config.seed."""
    log_post = make_log_posterior(y, config.sigma2_init)
    rng = np.random.default_rng(config.seed)
    theta, lp = _start_state(config, y, log_post)
    d = np.asarray(config.d)
    for _ in range(config.burn_in):
        theta, _, lp = metropolis_step(theta, d, log_post, rng, lp)
    draws = np.empty((config.retained, 4))
    accepted = np.empty(config.retained, dtype=bool)
    for i in range(config.retained):
        theta, acc, lp = metropolis_step(theta, d, log_post, rng, lp)
        draws[i] = theta
        accepted[i] = acc
    return Chain(draws, accepted, burn_in=config.burn_in, kernel_tag="metropolis", seed=config.seed)


def run_adaptive(config: AdaptiveConfig, y) -> tuple[Chain, list[ProposalUpdate]]:
    """Adaptive run: Metropolis burn-in, a recorded Metropolis pool that
    seeds the moment accumulator, then independence MH with the proposal
    re-estimated from all accumulated draws every `rebuild_every` steps.

    The pool draws count toward `retained`. Returns the chain and one
    history entry per (re)build of the proposal. Deterministic in
    config.seed.
    """
    log_post = make_log_posterior(y, config.sigma2_init)
    rng = np.random.default_rng(config.seed)
    theta, lp = _start_state(config, y, log_post)
    d = np.asarray(config.d)
    for _ in range(config.burn_in):
        theta, _, lp = metropolis_step(theta, d, log_post, rng, lp)

    draws = np.empty((config.retained, 4))
    accepted = np.empty(config.retained, dtype=bool)
    moments = MomentAccumulator(4)
    history: list[ProposalUpdate] = []
    i = 0
    for _ in range(min(config.initial_pool, config.retained)):
        theta, acc, lp = metropolis_step(theta, d, log_post, rng, lp)
        draws[i] = theta
        accepted[i] = acc
        moments.add(theta)
        i += 1

    if i < config.retained:
        spec = build_spec(moments, config.nu)
        history.append(
            ProposalUpdate(0, moments.count, moments.mean.copy(), moments.covariance())
        )
        lg = student_t_log_density(theta, spec)
        rebuilds = 0
        while i < config.retained:
            batch = min(config.rebuild_every, config.retained - i)
            for _ in range(batch):
                theta, acc, lp, lg = mh_independence_step(theta, spec, log_post, rng, lp, lg)
                draws[i] = theta
                accepted[i] = acc
                moments.add(theta)
                i += 1
            frozen = config.freeze_after is not None and rebuilds >= config.freeze_after
            if batch == config.rebuild_every and not frozen:
                spec = build_spec(moments, config.nu)
                rebuilds += 1
                history.append(
                    ProposalUpdate(rebuilds, moments.count, moments.mean.copy(), moments.covariance())
                )
                # cached proposal density refers to the old spec
                lg = student_t_log_density(theta, spec)

    chain = Chain(draws, accepted, burn_in=config.burn_in, kernel_tag="adaptive_mh", seed=config.seed)
    return chain, history


def tune_step_sizes(log_post, theta_init: np.ndarray, d0, seed: int,
                    window: int = 500, band: tuple[float, float] = (0.5, 0.8),
                    max_rounds: int = 40):
    """Pilot tuner for the Metropolis widths: scale all of d up or down
    (doubling/halving, then geometric bisection once bracketed) over
    `window`-step pilot runs until the acceptance fraction lands in `band`.

    Returns (d, acceptance_fraction). The pilot chain keeps moving between
    rounds so tuning happens near the posterior mass.
    """
    rng = np.random.default_rng([seed, 1])
    theta = np.asarray(theta_init, dtype=np.float64)
    lp = float(log_post(theta))
    if not math.isfinite(lp):
        raise InvalidParams("pilot start has zero posterior density")
    d0 = np.asarray(d0, dtype=np.float64)
    scale = 1.0
    too_small = None  # scale with acceptance above the band
    too_big = None  # scale with acceptance below the band
    for _ in range(max_rounds):
        d = d0 * scale
        n_acc = 0
        for _ in range(window):
            theta, acc, lp = metropolis_step(theta, d, log_post, rng, lp)
            n_acc += acc
        frac = n_acc / window
        if band[0] <= frac <= band[1]:
            return d, frac
        if frac > band[1]:
            too_small = scale
        else:
            too_big = scale
        if too_small is not None and too_big is not None:
            scale = math.sqrt(too_small * too_big)
        elif too_small is not None:
            scale = too_small * 2.0
        else:
            scale = too_big / 2.0
    raise GarchMcmcError(
        f"step-size tuner did not reach the {band} acceptance band "
        f"in {max_rounds} pilot windows"
    )


_CHAIN_HEADER = "step,alpha,beta,omega,lambda,accepted"


def write_chain_csv(chain: Chain, path) -> None:
    """Chain CSV: header step,alpha,beta,omega,lambda,accepted; one row per
    retained draw; acceptance flag as 0/1."""
    lines = [_CHAIN_HEADER]
    for i in range(len(chain)):
        row = chain.draws[i]
        vals = ",".join(_FLOAT_FMT % v for v in row)
        lines.append(f"{i},{vals},{1 if chain.accepted[i] else 0}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_chain_csv(path) -> Chain:
    """Parse a chain CSV, validating the schema row by row."""
    with open(path) as fh:
        header = fh.readline().strip()
        if header != _CHAIN_HEADER:
            raise CsvFormatError(
                f"expected header {_CHAIN_HEADER!r}, got {header!r}", line=1
            )
        draws: list[list[float]] = []
        accepted: list[bool] = []
        for lineno, raw in enumerate(fh, start=2):
            row = raw.strip()
            if not row:
                continue
            parts = row.split(",")
            if len(parts) != 6:
                raise CsvFormatError(f"expected 6 columns, got {len(parts)}", line=lineno)
            try:
                draws.append([float(p) for p in parts[1:5]])
                flag = parts[5]
                if flag not in ("0", "1"):
                    raise ValueError
                accepted.append(flag == "1")
            except ValueError:
                raise CsvFormatError(f"malformed row {row!r}", line=lineno) from None
    if not draws:
        raise CsvFormatError("chain file holds no draws", line=2)
    return Chain(
        np.array(draws), np.array(accepted), burn_in=0, kernel_tag="loaded", seed=0
    )
