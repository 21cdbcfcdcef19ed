"""Benchmark the numba kernels against the pure-numpy fallback.

Run twice to compare backends:

    python benchmarks/kernel_benchmark.py
    QWEIBULL_DISABLE_NUMBA=1 python benchmarks/kernel_benchmark.py

or pass --both to fork a child process with the fallback enabled.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from qweibull import GaConfig, WeibullParams, fit_mlqe, weibull_sample
from qweibull._kernels import backend, logq_batch, warmup


def time_kernel(pop_size: int, n: int, repeats: int = 200) -> float:
    rng = np.random.default_rng(0)
    alphas = rng.uniform(0.5, 8.0, pop_size)
    betas = rng.uniform(0.5, 8.0, pop_size)
    logdata = np.log(weibull_sample(WeibullParams(4, 2), n, rng))
    logq_batch(alphas, betas, logdata, 0.84)  # warm
    t0 = time.perf_counter()
    for _ in range(repeats):
        logq_batch(alphas, betas, logdata, 0.84)
    return (time.perf_counter() - t0) / repeats


def time_fit(n: int, repeats: int = 20) -> float:
    rng = np.random.default_rng(1)
    data = weibull_sample(WeibullParams(4, 2), n, rng)
    cfg = GaConfig(population_size=48, generations=64, seed=3)
    fit_mlqe(data, 0.84, cfg)  # warm
    t0 = time.perf_counter()
    for _ in range(repeats):
        fit_mlqe(data, 0.84, cfg)
    return (time.perf_counter() - t0) / repeats


def run() -> None:
    warmup()
    print(f"backend: {backend()}")
    print(f"{'pop':>5} {'n':>6} {'us/population-eval':>20}")
    for pop in (48, 100):
        for n in (50, 100, 200, 1000):
            dt = time_kernel(pop, n)
            print(f"{pop:>5} {n:>6} {dt * 1e6:>20.1f}")
    for n in (50, 200):
        print(f"full MLqE fit, n={n}: {time_fit(n) * 1e3:.1f} ms")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--both", action="store_true", help="also run the numpy fallback in a child process")
    args = parser.parse_args()
    run()
    if args.both and backend() == "numba":
        env = dict(os.environ, QWEIBULL_DISABLE_NUMBA="1")
        print()
        sys.stdout.flush()
        subprocess.run([sys.executable, __file__], env=env, check=True)


if __name__ == "__main__":
    main()
