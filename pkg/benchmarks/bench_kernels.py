"""Compare the numba and numpy channel-reduction kernels.

    python benchmarks/bench_kernels.py [--trials 100000] [--n-r 100] [--repeat 5]

Times the kernel alone on a pre-drawn block and the full simulation
(draw + reduce) under each backend, selected through SECRELAY_DISABLE_NUMBA
in a subprocess so import-time dispatch is exercised as well.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from secrelay import _kernels

FULL = """
import time
from secrelay import montecarlo as mc, _kernels
from secrelay.params import SystemParams
p = SystemParams(n_r={n_r})
mc.sample_gains(p, 2000, 1, workers=1)
mc.clear_cache()
t = time.perf_counter()
mc.sample_gains(p, {trials}, 1, workers=1)
print(_kernels.BACKEND, time.perf_counter() - t)
"""


def bench_kernel(trials, n_r, repeat):
    z = np.random.default_rng(0).standard_normal((trials, 4, n_r, 2))
    rows = [("numpy", lambda: _kernels.projection_gains_numpy(z, 0.9))]
    if _kernels.NUMBA_AVAILABLE:
        _kernels.projection_gains_numba(z[:2], 0.9)
        rows.append(("numba", lambda: _kernels.projection_gains_numba(z, 0.9)))
    print(f"kernel only, {trials} trials x {n_r} antennas")
    for name, fn in rows:
        best = min(timeit.repeat(fn, number=1, repeat=repeat))
        print(f"  {name:6s} {best * 1e3:9.1f} ms  ({best / trials * 1e9:7.1f} ns/trial)")


def bench_full(trials, n_r):
    print(f"draw + reduce, {trials} trials x {n_r} antennas, 1 worker")
    for disable in ("1", "0"):
        env = dict(os.environ, SECRELAY_DISABLE_NUMBA=disable)
        out = subprocess.run([sys.executable, "-c", FULL.format(n_r=n_r, trials=trials)],
                             env=env, capture_output=True, text=True, check=True)
        backend, secs = out.stdout.split()
        print(f"  {backend:6s} {float(secs):9.2f} s")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=100_000)
    ap.add_argument("--n-r", type=int, default=100)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    bench_kernel(min(args.trials, 20_000), args.n_r, args.repeat)
    bench_full(args.trials, args.n_r)


if __name__ == "__main__":
    main()
