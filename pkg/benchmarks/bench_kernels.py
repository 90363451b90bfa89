"""Benchmark the likelihood kernels: compiled core vs numpy fallback.

Two views:

1. Kernel microbenchmark (in-process): per-call time of sigma2_path and
   log_likelihood on series of several lengths, both backends, plus the
   agreement check that makes the speed comparison meaningful.
2. End-to-end sampler benchmark (subprocesses): wall-clock time of an
   identical run_metropolis workload under GARCH_MCMC_BACKEND=compiled and
   =python, since the backend is fixed at import time.

Usage:
    python benchmarks/bench_kernels.py [--sizes 200,2000,20000]
                                       [--repeat 200] [--steps 20000]
                                       [--skip-end-to-end]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from garchmcmc import ParamVector, simulate
from garchmcmc._kernels import available_backends
from garchmcmc._kernels import _numpy as numpy_backend

try:
    from garchmcmc._kernels import _core as compiled_backend
except ImportError:
    compiled_backend = None

TRUE = ParamVector(0.03, 0.85, 0.05, 0.1)
ARGS = (TRUE.alpha, TRUE.beta, TRUE.omega, TRUE.lam)

_END_TO_END_SNIPPET = """
import time
import numpy as np
from garchmcmc import AdaptiveConfig, ParamVector, backend_name, run_metropolis, simulate

data = simulate(ParamVector(0.03, 0.85, 0.05, 0.1), 2000, 23)
cfg = AdaptiveConfig(burn_in=1000, initial_pool=2, retained={steps}, seed=7)
t0 = time.perf_counter()
chain = run_metropolis(cfg, data.y)
dt = time.perf_counter() - t0
print(f"{{backend_name()}} {{dt:.3f}} {{repr(chain.draws.sum())}}")
"""


def _time_call(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(sizes, repeat):
    backends = [("python", numpy_backend)]
    if compiled_backend is not None:
        backends.insert(0, ("compiled", compiled_backend))

    print("kernel microbenchmark (best of {} calls, seconds/call)".format(repeat))
    header = f"{'n':>8}  {'function':<16}" + "".join(
        f"{name:>12}" for name, _ in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))

    for n in sizes:
        y = simulate(TRUE, n, 23).y
        s2 = float(y.var())
        for label, attr in (("sigma2_path", "sigma2_path"),
                            ("log_likelihood", "log_likelihood")):
            times = []
            values = []
            for _, mod in backends:
                fn = getattr(mod, attr)
                values.append(np.asarray(fn(y, *ARGS, s2)))
                times.append(_time_call(lambda: fn(y, *ARGS, s2), repeat))
            if len(values) == 2:
                err = float(np.max(np.abs(values[0] - values[1])))
                if err > 1e-10:
                    raise SystemExit(
                        f"backends disagree on {label} (n={n}): {err}")
            row = f"{n:>8}  {label:<16}" + "".join(
                f"{t:>12.3e}" for t in times)
            if len(times) == 2:
                row += f"{times[1] / times[0]:>9.1f}x"
            print(row)


def bench_end_to_end(steps):
    print()
    print(f"end-to-end run_metropolis ({steps} retained draws, n=2000 series)")
    results = {}
    for backend in available_backends():
        env = dict(os.environ, GARCH_MCMC_BACKEND=backend)
        out = subprocess.run(
            [sys.executable, "-c", _END_TO_END_SNIPPET.format(steps=steps)],
            capture_output=True, text=True, env=env, check=True)
        name, dt, checksum = out.stdout.split()
        results[name] = (float(dt), checksum)
        print(f"  {name:<10} {float(dt):>8.3f} s")
    if len(results) == 2:
        sums = {cs for _, cs in results.values()}
        if len(sums) != 1:
            raise SystemExit(f"backends produced different chains: {results}")
        speedup = results["python"][0] / results["compiled"][0]
        print(f"  speedup    {speedup:>8.1f}x (identical chains)")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="200,2000,20000",
                        help="comma-separated series lengths")
    parser.add_argument("--repeat", type=int, default=200,
                        help="calls per timing (best-of)")
    parser.add_argument("--steps", type=int, default=20000,
                        help="retained draws for the end-to-end run")
    parser.add_argument("--skip-end-to-end", action="store_true")
    args = parser.parse_args(argv)

    sizes = [int(s) for s in args.sizes.split(",") if s]
    print(f"available backends: {', '.join(available_backends())}")
    print()
    bench_kernels(sizes, args.repeat)
    if not args.skip_end_to_end:
        bench_end_to_end(args.steps)


if __name__ == "__main__":
    main()
