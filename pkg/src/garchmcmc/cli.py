"""Command-line front end: simulate / fit / diagnose / experiment.

Every failure exits nonzero with a single machine-readable line on stderr,

    error: <slug>: <message>

with exit codes 2 (bad input or usage), 3 (file I/O), 4 (degenerate
proposal covariance), 5 (experiment run failure). Success is exit 0.

Value precedence everywhere: command-line flag > config file > default.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields, replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import load_config
from .diagnostics import (summarize, write_acceptance_csv, write_acf_csv,
                          write_report)
from .exceptions import (ConfigError, ConstantSeries, CsvFormatError,
                         DegenerateCovariance, GarchMcmcError, InvalidParams,
                         PersistenceError, WindowNotFound)
from .experiment import ExperimentSpec, run_experiment
from .model import (PARAM_NAMES, ParamVector, make_log_posterior,
                    read_series_csv, simulate, write_series_csv)
from .proposal import write_proposal_history_csv
from .samplers import (AdaptiveConfig, default_theta_init, read_chain_csv,
                       run_adaptive, run_metropolis, tune_step_sizes,
                       write_chain_csv)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of printing multi-line usage + exiting."""

    def error(self, message):
        raise _UsageError(message)


def _fail(slug: str, message: str, code: int) -> int:
    print(f"error: {slug}: {message}", file=sys.stderr)
    return code


def _build_parser() -> _Parser:
    parser = _Parser(prog="garch-mcmc",
                     description="Bayesian GJR-GARCH(1,1) inference by MCMC")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True,
                                parser_class=_Parser)

    p_sim = sub.add_parser("simulate", help="generate a synthetic return series")
    p_sim.add_argument("--alpha", type=float, default=0.03)
    p_sim.add_argument("--beta", type=float, default=0.85)
    p_sim.add_argument("--omega", type=float, default=0.05)
    p_sim.add_argument("--lambda", dest="lam", type=float, default=0.1)
    p_sim.add_argument("--n", type=int, default=2000)
    p_sim.add_argument("--seed", type=int, default=23)
    p_sim.add_argument("--out", default="data.csv")

    p_fit = sub.add_parser("fit", help="fit the model to a return series")
    p_fit.add_argument("--data", required=True)
    p_fit.add_argument("--sampler", choices=("adaptive", "metropolis"),
                       default="adaptive")
    p_fit.add_argument("--config")
    p_fit.add_argument("--out-prefix", default="fit_")
    p_fit.add_argument("--seed", type=int)
    p_fit.add_argument("--auto-tune", action="store_true",
                       help="pilot-tune the Metropolis widths before the run")
    p_fit.add_argument("--freeze-after", type=int, metavar="K",
                       help="stop proposal rebuilds after the K-th")

    p_diag = sub.add_parser("diagnose", help="diagnostics for a saved chain")
    p_diag.add_argument("--chain", required=True)
    p_diag.add_argument("--out-prefix", default="diagnose_")

    p_exp = sub.add_parser("experiment",
                           help="full two-sampler reproduction study")
    p_exp.add_argument("--config")
    p_exp.add_argument("--out-dir", default="experiment_out")
    p_exp.add_argument("--quick", action="store_true",
                       help="small run: n=200, retained=10000")
    return parser


def _cmd_simulate(args) -> int:
    if args.n < 1:
        raise _UsageError("--n must be >= 1")
    params = ParamVector(alpha=args.alpha, beta=args.beta,
                         omega=args.omega, lam=args.lam)
    series = simulate(params, args.n, args.seed)
    write_series_csv(series, args.out)
    print(f"wrote {args.out} ({args.n} rows)")
    return 0


_ADAPTIVE_KEYS = tuple(f.name for f in fields(AdaptiveConfig))


def _adaptive_config_from(mapping: dict) -> AdaptiveConfig:
    kwargs = {k: v for k, v in mapping.items() if k in _ADAPTIVE_KEYS}
    if "theta_init" in kwargs:
        kwargs["theta_init"] = ParamVector.from_array(kwargs["theta_init"])
    return AdaptiveConfig(**kwargs)


def _cmd_fit(args) -> int:
    series = read_series_csv(args.data)
    y = series.y
    if y.size < 10:
        raise _UsageError(f"need at least 10 observations, got {y.size}")
    if np.all(y == y[0]):
        raise ConstantSeries("data series is constant; the model cannot be fit")
    mapping = load_config(args.config) if args.config else {}
    if args.seed is not None:
        mapping["seed"] = args.seed
    if args.freeze_after is not None:
        mapping["freeze_after"] = args.freeze_after
    config = _adaptive_config_from(mapping)

    if args.auto_tune:
        log_post = make_log_posterior(y, config.sigma2_init)
        theta0 = (config.theta_init if config.theta_init is not None
                  else default_theta_init(y)).as_array()
        d, frac = tune_step_sizes(log_post, theta0, config.d, config.seed)
        config = replace(config, d=tuple(d))
        print("auto-tune: d=" + ",".join(f"{v:.6g}" for v in d)
              + f" acceptance={frac:.3f}")

    prefix = args.out_prefix
    if args.sampler == "adaptive":
        chain, history = run_adaptive(config, y)
        write_proposal_history_csv(history, f"{prefix}proposal_history.csv")
    else:
        chain = run_metropolis(config, y)
    report = summarize(chain)
    write_chain_csv(chain, f"{prefix}chain.csv")
    write_report(report, f"{prefix}report.txt")
    write_acceptance_csv(report.acceptance_trace, f"{prefix}acceptance.csv")
    for name in PARAM_NAMES:
        s = report.params[name]
        if s.acf is not None:
            write_acf_csv(s.acf, f"{prefix}acf_{name}.csv")
    print(f"wrote {prefix}chain.csv ({len(chain)} draws) and {prefix}report.txt")
    return 0


def _cmd_diagnose(args) -> int:
    chain = read_chain_csv(args.chain)
    report = summarize(chain)
    prefix = args.out_prefix
    write_report(report, f"{prefix}report.txt")
    write_acceptance_csv(report.acceptance_trace, f"{prefix}acceptance.csv")
    for name in PARAM_NAMES:
        s = report.params[name]
        if s.acf is not None:
            write_acf_csv(s.acf, f"{prefix}acf_{name}.csv")
    print(f"wrote {prefix}report.txt")
    return 0


def _cmd_experiment(args) -> int:
    mapping = load_config(args.config) if args.config else {}
    adaptive = _adaptive_config_from(mapping)
    spec_kwargs = {"adaptive": adaptive, "output_dir": args.out_dir}
    if all(k in mapping for k in ("alpha", "beta", "omega", "lambda")):
        spec_kwargs["true_params"] = ParamVector(
            alpha=mapping["alpha"], beta=mapping["beta"],
            omega=mapping["omega"], lam=mapping["lambda"])
    elif any(k in mapping for k in ("alpha", "beta", "omega", "lambda")):
        raise ConfigError("true parameters must be given all together "
                          "(alpha, beta, omega, lambda) or not at all")
    for key in ("n", "data_seed", "metropolis_seed", "adaptive_seed"):
        if key in mapping:
            spec_kwargs[key] = mapping[key]
    if "d" in mapping:
        spec_kwargs["metropolis_d"] = mapping["d"]
    try:
        spec = ExperimentSpec(**spec_kwargs)
        if args.quick:
            spec = replace(spec, n=200,
                           adaptive=replace(spec.adaptive, retained=10000))
    except ValueError as exc:
        raise _UsageError(str(exc)) from None

    try:
        report = run_experiment(spec)
    except (OSError, DegenerateCovariance):
        raise  # keep their dedicated exit codes (3 and 4)
    except (GarchMcmcError, ValueError, ArithmeticError) as exc:
        print(f"error: experiment: {exc}", file=sys.stderr)
        return 5
    print(f"wrote {report.output_dir}/table1.txt")
    return 0


_DISPATCH = {
    "simulate": _cmd_simulate,
    "fit": _cmd_fit,
    "diagnose": _cmd_diagnose,
    "experiment": _cmd_experiment,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        return _fail("usage", str(exc), 2)
    try:
        return _DISPATCH[args.subcommand](args)
    except _UsageError as exc:
        return _fail("usage", str(exc), 2)
    except CsvFormatError as exc:
        return _fail("csv-format", str(exc), 2)
    except ConfigError as exc:
        return _fail("config", str(exc), 2)
    except (InvalidParams, PersistenceError) as exc:
        return _fail("invalid-params", str(exc), 2)
    except ConstantSeries as exc:
        return _fail("constant-series", str(exc), 2)
    except WindowNotFound as exc:
        return _fail("window-not-found", str(exc), 2)
    except DegenerateCovariance as exc:
        return _fail("degenerate-covariance",
                     f"{exc} (try a larger initial_pool or burn_in so the "
                     "moment estimate has full rank)", 4)
    except OSError as exc:
        detail = exc.strerror or str(exc)
        if getattr(exc, "filename", None):
            detail = f"{detail}: {exc.filename}"
        return _fail("io", detail, 3)
    except ValueError as exc:
        return _fail("usage", str(exc), 2)
    except GarchMcmcError as exc:
        return _fail("run", str(exc), 2)


if __name__ == "__main__":
    sys.exit(main(None))
