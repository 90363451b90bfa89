"""One-command benchmark study: simulate a GJR-GARCH series, fit it with
both samplers on the same data, and emit every comparison artifact into a
single directory.

Output layout (fixed):

    data.csv                         simulated series
    chain_adaptive.csv               retained draws, adaptive scheme
    chain_metropolis.csv             retained draws, random-walk Metropolis
    history_adaptive.csv             step vs parameter trace (same file as chain)
    history_metropolis.csv
    acf_<sampler>_<param>.csv        autocorrelation per parameter
    proposal_history.csv             proposal rebuild log (adaptive)
    acceptance.csv                   adaptive per-window acceptance fractions
    report_adaptive.txt              per-parameter summary blocks
    report_metropolis.txt
    table1.txt                       side-by-side comparison table

The two chains are independent given the data and run concurrently; the
GARCH_MCMC_THREADS environment variable caps the worker count. All file
writes happen after both chains finish, and any partially written output
is removed if the run fails.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .diagnostics import (DiagnosticsReport, summarize, write_acceptance_csv,
                          write_acf_csv, write_report)
from .model import PARAM_NAMES, ParamVector, ReturnSeries, simulate, write_series_csv
from .proposal import write_proposal_history_csv
from .samplers import (DEFAULT_D, AdaptiveConfig, Chain, run_adaptive,
                       run_metropolis, write_chain_csv)

DEFAULT_TRUE_PARAMS = ParamVector(alpha=0.03, beta=0.85, omega=0.05, lam=0.1)

# Published benchmark for this exact setup (n=2000 draws from the same true
# parameters; independent data realization, so values are comparable in
# distribution, never digit by digit). Order follows PARAM_NAMES.
REFERENCE_TABLE = {
    "true": (0.03, 0.85, 0.05, 0.1),
    "adaptive": {
        "mean": (0.03285, 0.85540, 0.04522, 0.08719),
        "sd": (0.0015, 0.040, 0.019, 0.026),
        "se": (0.00011, 0.00025, 0.00011, 0.00066),
        "two_tau": (2.8, 3.3, 4.6, 2.6),
        "two_tau_err": (0.2, 0.7, 0.8, 0.2),
    },
    "metropolis": {
        "mean": (0.0323, 0.855, 0.0454, 0.0895),
        "sd": (0.0015, 0.038, 0.018, 0.026),
        "se": (0.0007, 0.004, 0.0018, 0.0015),
        "two_tau": (320.0, 1050.0, 990.0, 350.0),
        "two_tau_err": (100.0, 350.0, 330.0, 110.0),
    },
}


def _thread_cap() -> int:
    raw = os.environ.get("GARCH_MCMC_THREADS", "")
    if not raw:
        return 2
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"GARCH_MCMC_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise ValueError("GARCH_MCMC_THREADS must be >= 1")
    return n


@dataclass(frozen=True)
class ExperimentSpec:
    """Complete description of one reproduction run."""

    true_params: ParamVector = DEFAULT_TRUE_PARAMS
    n: int = 2000
    data_seed: int = 23
    metropolis_seed: int = 91
    adaptive_seed: int = 92
    adaptive: AdaptiveConfig = field(default_factory=AdaptiveConfig)
    metropolis_d: tuple = DEFAULT_D
    output_dir: Path | str = "experiment_out"

    def __post_init__(self):
        if not self.true_params.in_support():
            raise ValueError("true_params outside the model support")
        if not self.true_params.persistence < 1.0:
            raise ValueError("true_params must have persistence < 1")
        if self.n < 2:
            raise ValueError("n must be >= 2")
        d = tuple(float(v) for v in self.metropolis_d)
        if len(d) != 4 or any(v < 0.0 for v in d) or not any(d):
            raise ValueError("metropolis_d must be 4 non-negative values, not all zero")
        object.__setattr__(self, "metropolis_d", d)


@dataclass(frozen=True)
class ExperimentReport:
    """Everything run_experiment computed, plus where it was written."""

    spec: ExperimentSpec
    data: ReturnSeries
    chain_adaptive: Chain
    chain_metropolis: Chain
    history: list
    report_adaptive: DiagnosticsReport
    report_metropolis: DiagnosticsReport
    table_text: str
    output_dir: Path


def _run_chains(spec: ExperimentSpec, y: np.ndarray):
    adaptive_cfg = replace(spec.adaptive, seed=spec.adaptive_seed)
    metro_cfg = replace(spec.adaptive, seed=spec.metropolis_seed, d=spec.metropolis_d)
    with ThreadPoolExecutor(max_workers=min(2, _thread_cap())) as pool:
        fut_a = pool.submit(run_adaptive, adaptive_cfg, y)
        fut_m = pool.submit(run_metropolis, metro_cfg, y)
        chain_a, history = fut_a.result()
        chain_m = fut_m.result()
    return chain_a, history, chain_m


def _fmt(x: float) -> str:
    return f"{x:.05g}"


def _table_block(title: str, rows: list) -> list:
    label_width = max(12, *(len(label) for label, _ in rows)) + 2
    width = max(14, *(len(v) + 2 for _, values in rows for v in values),
                *(len(n) + 2 for n in PARAM_NAMES))
    out = [title]
    header = " " * label_width + "".join(n.rjust(width) for n in PARAM_NAMES)
    out.append(header)
    out.append("-" * len(header))
    for label, values in rows:
        out.append(label.ljust(label_width) + "".join(v.rjust(width) for v in values))
    return out


def _sampler_rows(label: str, stats: dict) -> list:
    return [
        (label, [_fmt(v) for v in stats["mean"]]),
        ("  SD", [_fmt(v) for v in stats["sd"]]),
        ("  SE", [_fmt(v) for v in stats["se"]]),
        ("  2tau", [f"{_fmt(t)} +- {_fmt(e)}"
                    for t, e in zip(stats["two_tau"], stats["two_tau_err"])]),
    ]


def _report_stats(report: DiagnosticsReport) -> dict:
    cols = [report.params[name] for name in PARAM_NAMES]
    return {
        "mean": [s.mean for s in cols],
        "sd": [s.sd for s in cols],
        "se": [s.se for s in cols],
        "two_tau": [s.two_tau for s in cols],
        "two_tau_err": [2.0 * s.tau_err for s in cols],
    }


def format_table(spec: ExperimentSpec, report_a: DiagnosticsReport,
                 report_m: DiagnosticsReport) -> str:
    """Fixed-width comparison table: this run's numbers next to the
    published reference values (different data realization)."""
    rows_run = [("true", [_fmt(v) for v in spec.true_params.as_array()])]
    rows_run += _sampler_rows("adaptive", _report_stats(report_a))
    rows_run += _sampler_rows("metropolis", _report_stats(report_m))
    rows_ref = [("true", [_fmt(v) for v in REFERENCE_TABLE["true"]])]
    rows_ref += _sampler_rows("adaptive", REFERENCE_TABLE["adaptive"])
    rows_ref += _sampler_rows("metropolis", REFERENCE_TABLE["metropolis"])
    lines = _table_block("This run", rows_run)
    lines.append("")
    lines += _table_block("Published reference values (independent data realization)", rows_ref)
    return "\n".join(lines) + "\n"


def run_experiment(spec: ExperimentSpec) -> ExperimentReport:
    """Simulate, fit with both samplers, diagnose, and write all artifacts.

    On failure every file already written into output_dir by this call is
    removed before the error propagates.
    """
    out = Path(spec.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    data = simulate(spec.true_params, spec.n, spec.data_seed)
    chain_a, history, chain_m = _run_chains(spec, data.y)
    report_a = summarize(chain_a)
    report_m = summarize(chain_m)
    table = format_table(spec, report_a, report_m)

    written: list[Path] = []

    def _emit(name: str, writer, *args) -> None:
        path = out / name
        written.append(path)
        writer(*args, path)

    try:
        _emit("data.csv", write_series_csv, data)
        _emit("chain_adaptive.csv", write_chain_csv, chain_a)
        _emit("chain_metropolis.csv", write_chain_csv, chain_m)
        _emit("history_adaptive.csv", write_chain_csv, chain_a)
        _emit("history_metropolis.csv", write_chain_csv, chain_m)
        _emit("proposal_history.csv", write_proposal_history_csv, history)
        _emit("acceptance.csv", write_acceptance_csv, report_a.acceptance_trace)
        for tag, report in (("adaptive", report_a), ("metropolis", report_m)):
            _emit(f"report_{tag}.txt", write_report, report)
            for name in PARAM_NAMES:
                _emit(f"acf_{tag}_{name}.csv", write_acf_csv, report.params[name].acf)
        written.append(out / "table1.txt")
        (out / "table1.txt").write_text(table)
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        raise

    return ExperimentReport(
        spec=spec, data=data, chain_adaptive=chain_a, chain_metropolis=chain_m,
        history=history, report_adaptive=report_a, report_metropolis=report_m,
        table_text=table, output_dir=out,
    )
