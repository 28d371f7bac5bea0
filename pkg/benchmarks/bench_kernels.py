"""Compare the numba and numpy kernel backends on a tunneling-time grid workload.

    python benchmarks/bench_kernels.py [--repeat 5] [--points 100]

Each backend evaluates the nested dwell integral, the phase integral and the
traversal integral over an energy grid and several friction coefficients.
The first numba call (JIT compilation, cached on disk afterwards) is timed
separately.
"""

import argparse
import time

import numpy as np

from tunnelkit import kernels
from tunnelkit.barrier import DissipativeBarrier, Particle, kappa0
from tunnelkit.units import constants


def workload(mod, energies, etas, barrier):
    hbar = constants().hbar
    total = 0.0
    for eta in etas:
        g = eta / hbar
        for e in energies:
            k0 = kappa0(Particle(e), barrier)
            for mode in (kernels.LINEARIZED, kernels.FULL):
                total += mod.dwell_integral(mode, k0, g, barrier.length, 1e-10, 1_000_000)[0]
                total += mod.phase_integral(mode, k0, g, barrier.length, 1e-10, 1_000_000)[0]
                total += mod.traversal_integral(mode, k0, g, barrier.length, 1e-10, 1_000_000)[0]
    return total


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--points", type=int, default=100)
    args = ap.parse_args(argv)

    barrier = DissipativeBarrier(1.8, 20.8)
    energies = np.linspace(0.02, 0.98, args.points) * barrier.v0_height
    etas = (0.0, 0.002, 0.005)
    results = {}
    for name in ("numba", "numpy"):
        mod = kernels.backend_module(name)
        t0 = time.perf_counter()
        mod.dwell_integral(kernels.FULL, 0.5, 0.001, 20.8, 1e-10, 1_000_000)
        first = time.perf_counter() - t0
        times_ = []
        for _ in range(args.repeat):
            t0 = time.perf_counter()
            checksum = workload(mod, energies, etas, barrier)
            times_.append(time.perf_counter() - t0)
        results[name] = (min(times_), first, checksum)
        print(f"{name:6s} best {min(times_) * 1e3:9.1f} ms   first call {first * 1e3:8.1f} ms   "
              f"checksum {checksum:.15g}")
    speedup = results["numpy"][0] / results["numba"][0]
    agree = abs(results["numba"][2] / results["numpy"][2] - 1)
    print(f"speedup numba/numpy: {speedup:.1f}x   checksum rel diff {agree:.1e}")


if __name__ == "__main__":
    main()
