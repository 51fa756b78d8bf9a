"""Compare the compiled and pure-python engines on realistic workloads.

Usage: python3 benchmarks/bench_engines.py [--steps-per-period N] [--tau S]

Times three layers separately: building the per-step unitaries
(eigendecomposition bound), accumulating them along a drive (matmul
bound), and a full evolve through the standard pi pulse.
"""

import argparse
import time

import numpy as np

from wolfsim.engine import available_engines, get_engine
from wolfsim.hamiltonian import FieldSchedule, fumarate, omega_st, total_hamiltonian
from wolfsim.propagator import evolve, phip_initial_state


def timeit(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps-per-period", type=int, default=1000)
    parser.add_argument("--tau", type=float, default=0.6553,
                        help="pulse duration for the evolve benchmark (s)")
    args = parser.parse_args()

    sys = fumarate()
    w0 = omega_st(sys, 2e-6)
    field = FieldSchedule(b_bias=2e-6, b_wolf_peak=2e-6, omega_wolf=w0,
                          duration=args.tau)
    hs = total_hamiltonian(sys, FieldSchedule(2e-6, 0.0, w0), 0.0)
    hd = (total_hamiltonian(sys, FieldSchedule(0.0, 2e-6, w0), 0.0)
          - total_hamiltonian(sys, FieldSchedule(0.0, 0.0, w0), 0.0))

    spp = args.steps_per_period
    coeffs = np.cos(2 * np.pi * (np.arange(spp) + 0.5) / spp)
    dts = np.full(spp, 2 * np.pi / w0 / spp)
    n_steps = int(args.tau * w0 / (2 * np.pi) * spp)
    order = np.arange(n_steps) % spp
    samples = np.array([0, n_steps])
    rho0 = phip_initial_state()

    names = sorted(available_engines())
    print(f"engines: {', '.join(names)}")
    print(f"workload: {spp} unique steps, {n_steps} accumulated, tau = {args.tau} s")
    print()
    print(f"{'engine':<10} {'unitaries':>12} {'accumulate':>12} {'evolve':>12}")
    rows = {}
    for name in names:
        eng = get_engine(name)
        units = eng.step_unitaries(hs, hd, coeffs, dts)
        t_unit = timeit(lambda: eng.step_unitaries(hs, hd, coeffs, dts))
        t_acc = timeit(lambda: eng.accumulate(units, order, samples))
        t_evolve = timeit(
            lambda: evolve(sys, field, rho0, steps_per_period=spp,
                           sample_stride=10**9, engine=name),
            repeats=2,
        )
        rows[name] = (t_unit, t_acc, t_evolve)
        print(f"{name:<10} {t_unit * 1e3:>10.2f}ms {t_acc * 1e3:>10.2f}ms "
              f"{t_evolve * 1e3:>10.2f}ms")

    if "compiled" in rows and "python" in rows:
        print()
        for i, label in enumerate(("unitaries", "accumulate", "evolve")):
            ratio = rows["python"][i] / rows["compiled"][i]
            print(f"compiled speedup, {label}: {ratio:.2f}x")


if __name__ == "__main__":
    main()
