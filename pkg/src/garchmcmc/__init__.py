"""Bayesian inference for the GJR-GARCH(1,1) volatility model by MCMC.

Two samplers over the same flat-prior posterior: a random-walk Metropolis
baseline and an independence Metropolis-Hastings scheme whose multivariate
Student-t proposal is estimated, and periodically re-estimated, from the
chain's own history. Diagnostics quantify the payoff (integrated
autocorrelation times, inefficiency factors, statistical errors).

The likelihood recursion runs on a compiled kernel when the extension is
built, with an equivalent numpy fallback; see `backend_name()`.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND as _BACKEND
from .diagnostics import (DiagnosticsReport, ParamSummary, acceptance_trace,
                          acf, act, report_text, summarize,
                          write_acceptance_csv, write_acf_csv, write_report)
from .exceptions import (ConfigError, ConstantSeries, CsvFormatError,
                         DegenerateCovariance, GarchMcmcError, InvalidParams,
                         PersistenceError, WindowNotFound)
from .experiment import (REFERENCE_TABLE, ExperimentReport, ExperimentSpec,
                         run_experiment)
from .model import (PARAM_NAMES, ParamVector, ReturnSeries, VolatilityPath,
                    log_likelihood, log_posterior, make_log_posterior,
                    read_series_csv, simulate, unconditional_variance,
                    volatility_path, write_series_csv)
from .proposal import (MomentAccumulator, ProposalSpec, ProposalUpdate,
                       build_spec, student_t_log_density, student_t_sample,
                       write_proposal_history_csv)
from .samplers import (DEFAULT_D, AdaptiveConfig, Chain, default_theta_init,
                       metropolis_step, mh_independence_step, read_chain_csv,
                       run_adaptive, run_metropolis, tune_step_sizes,
                       write_chain_csv)


def backend_name() -> str:
    """Which likelihood kernel is active: 'compiled' or 'python'."""
    return _BACKEND


__all__ = [
    "__version__", "backend_name",
    "ParamVector", "ReturnSeries", "VolatilityPath", "PARAM_NAMES",
    "simulate", "volatility_path", "unconditional_variance",
    "log_likelihood", "log_posterior", "make_log_posterior",
    "read_series_csv", "write_series_csv",
    "ProposalSpec", "ProposalUpdate", "MomentAccumulator", "build_spec",
    "student_t_log_density", "student_t_sample",
    "AdaptiveConfig", "Chain", "DEFAULT_D", "default_theta_init",
    "metropolis_step", "mh_independence_step",
    "run_metropolis", "run_adaptive", "tune_step_sizes",
    "read_chain_csv", "write_chain_csv",
    "DiagnosticsReport", "ParamSummary", "acf", "act", "acceptance_trace",
    "summarize", "report_text",
    "write_report", "write_acf_csv", "write_acceptance_csv",
    "write_proposal_history_csv",
    "ExperimentSpec", "ExperimentReport", "REFERENCE_TABLE", "run_experiment",
    "GarchMcmcError", "InvalidParams", "PersistenceError",
    "DegenerateCovariance", "ConstantSeries", "WindowNotFound",
    "CsvFormatError", "ConfigError",
]
