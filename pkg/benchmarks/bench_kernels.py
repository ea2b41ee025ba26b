"""Benchmark the numba kernels against the pure-numpy fallback.

Runs the series-convolution kernel and two real workloads (a change of
eigenbasis sweep and a kext dimension sweep) under both backends by
re-importing the kernel module with BKSHAPES_NO_NUMBA toggled.

Usage: python benchmarks/bench_kernels.py [--trials 5]
"""

from __future__ import annotations

import argparse
import importlib
import os
import random
import sys
import time


def _fresh_modules(no_numba: bool):
    os.environ["BKSHAPES_NO_NUMBA"] = "1" if no_numba else ""
    for name in [m for m in sys.modules if m.startswith("bkshapes")]:
        del sys.modules[name]
    import bkshapes._kernels as kernels
    import bkshapes.gf as gf
    import bkshapes.series as series

    importlib.reload(kernels)
    return kernels, gf, series


def bench_convolution(kernels, gf, series, trials):
    F = gf.field(3, 4)
    rng = random.Random(1)
    a = series.Series(F, "v", 0, [rng.randrange(F.q) for _ in range(256)])
    b = series.Series(F, "v", 0, [rng.randrange(F.q) for _ in range(256)])
    _ = a * b  # warm-up (JIT compilation on the numba path)
    times = []
    for _ in range(trials):
        t0 = time.perf_counter()
        for _ in range(200):
            _ = a * b
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_eigenbasis_sweep(kernels, gf, series, trials):
    from bkshapes.phimod import change_eigenbasis, classify_shape
    from bkshapes.randgen import random_basis_change, random_module
    from bkshapes.tametypes import make_type

    tau = make_type(3, 2, "principal-series", 5, 2)
    F = gf.field(3, 2)
    rng = random.Random(2)
    mod = random_module(rng, tau, F, ["I_eta", "II"], degree=24)
    I = [random_basis_change(rng, F, 24) for _ in range(2)]
    _ = change_eigenbasis(mod, I, terms=64)
    times = []
    for _ in range(trials):
        t0 = time.perf_counter()
        for _ in range(20):
            classify_shape(change_eigenbasis(mod, I, terms=64))
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_kext_sweep(kernels, gf, series, trials):
    from bkshapes.extensions import ExceptionalPairError, kext_dimension
    from bkshapes.tametypes import enumerate_profiles, enumerate_types

    F = gf.field(3, 2)
    taus = enumerate_types(3, 2, kinds=("principal-series",))[:16]
    times = []
    for _ in range(trials):
        t0 = time.perf_counter()
        for tau in taus:
            for J in enumerate_profiles(tau):
                try:
                    kext_dimension(tau, J, 1, 2, F)
                except ExceptionalPairError:
                    pass
        times.append(time.perf_counter() - t0)
    return min(times)


BENCHES = [
    ("series convolution 256x256 over F_81", bench_convolution),
    ("eigenbasis change + shape, deg 24, N=64", bench_eigenbasis_sweep),
    ("kext sweep, 64 (type, profile) pairs", bench_kext_sweep),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=5)
    args = ap.parse_args()
    results = {}
    for no_numba in (False, True):
        kernels, gf, series = _fresh_modules(no_numba)
        label = kernels.BACKEND
        print(f"== backend: {label}")
        for name, fn in BENCHES:
            t = fn(kernels, gf, series, args.trials)
            results.setdefault(name, {})[label] = t
            print(f"  {name}: {t * 1000:.2f} ms")
    print("== ratios (numpy / numba)")
    for name, r in results.items():
        if "numba" in r and "numpy" in r:
            print(f"  {name}: {r['numpy'] / r['numba']:.2f}x")


if __name__ == "__main__":
    main()
