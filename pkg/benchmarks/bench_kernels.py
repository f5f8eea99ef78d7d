#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-NumPy fallback.

Times the two hot kernels on representative workloads (the default layout and
a dense 10-microcell one) and a full simulated trial via the public API with
each backend forced in turn.

Run:  python benchmarks/bench_kernels.py
"""

import os
import subprocess
import sys
import time

import numpy as np


def bench_kernel_funcs():
    from hetcoord.kernels import pure

    try:
        from hetcoord.kernels import _core
    except ImportError:
        print("compiled kernels not built; run pip install -e . first")
        return

    cases = {
        "default layout (14 users, macro Z=4)": (14, 4, 6),
        "dense layout (46 users, macro Z=4)": (46, 4, 6),
        "dense layout (46 users, micro Z=2)": (46, 2, 4),
    }
    rng = np.random.default_rng(0)
    print(f"{'kernel workload':45s} {'pure':>10s} {'compiled':>10s} {'speedup':>8s}")
    for label, (users, z, k) in cases.items():
        design = np.ascontiguousarray(
            rng.standard_normal((users, z)) + 1j * rng.standard_normal((users, z)))
        mask = np.ascontiguousarray(rng.uniform(size=(k, users)) < 0.7, dtype=np.uint8)
        served = np.arange(k, dtype=np.int64)
        noise = rng.uniform(0.5, 2.0, size=k)
        reps = 2000
        times = {}
        for name, fn in (("pure", pure.slnr_beamformers), ("compiled", _core.slnr_beamformers)):
            fn(design, mask, noise, served)  # warm up
            t0 = time.perf_counter()
            for _ in range(reps):
                fn(design, mask, noise, served)
            times[name] = (time.perf_counter() - t0) / reps
        print(f"{'beamformers: ' + label:45s} {times['pure']*1e6:8.1f}us {times['compiled']*1e6:8.1f}us "
              f"{times['pure']/times['compiled']:7.1f}x")

        vectors = np.ascontiguousarray(
            rng.standard_normal((k, z)) + 1j * rng.standard_normal((k, z)))
        channels = design
        times = {}
        for name, fn in (("pure", pure.pair_gains), ("compiled", _core.pair_gains)):
            fn(channels, vectors)
            t0 = time.perf_counter()
            for _ in range(reps):
                fn(channels, vectors)
            times[name] = (time.perf_counter() - t0) / reps
        print(f"{'pair gains:  ' + label:45s} {times['pure']*1e6:8.1f}us {times['compiled']*1e6:8.1f}us "
              f"{times['pure']/times['compiled']:7.1f}x")


def bench_full_trials():
    # Separate interpreters so the backend choice is made at import time.
    snippet = (
        "import time\n"
        "from hetcoord import ExperimentSpec, NetworkConfig, Strategy, run_experiment\n"
        "from hetcoord.kernels import BACKEND\n"
        "spec = ExperimentSpec(network=NetworkConfig(), scenario='rate_vs_snr',\n"
        "                      strategies=tuple(Strategy), snr_grid_db=(10.0,),\n"
        "                      trials=300, base_seed=42)\n"
        "run_experiment(spec)  # warm up\n"
        "t0 = time.perf_counter()\n"
        "run_experiment(spec)\n"
        "print(f'{BACKEND}: {(time.perf_counter() - t0) / 300 * 1e3:.3f} ms/trial "
        "(300 trials, 4 strategies)')\n"
    )
    print("\nfull experiment trial (all four strategies, default layout):")
    sys.stdout.flush()
    for pure_flag in ("0", "1"):
        env = dict(os.environ, HETCOORD_PURE=pure_flag)
        subprocess.run([sys.executable, "-c", snippet], env=env, check=True)


if __name__ == "__main__":
    bench_kernel_funcs()
    bench_full_trials()
