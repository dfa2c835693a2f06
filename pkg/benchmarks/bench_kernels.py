"""Compare the compiled nonlinear step against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--n 2048] [--reps 2000]
"""
import argparse
import time

import numpy as np

import ambec.dynamics as dynamics
from ambec import _kernels, _kernels_py
from ambec.ansatz import sample_fields
from ambec.consistency import solve_family_I
from ambec.dynamics import PropagatorConfig, default_grid, evolve


def time_step(step, pa, pm, reps):
    args = (1e-3, 3.0, 2.9, -2.8, 2.0, -0.75)
    step(pa, pm, *args)  # warm up
    start = time.perf_counter()
    for _ in range(reps):
        step(pa, pm, *args)
    return (time.perf_counter() - start) / reps


def time_evolve(step):
    rec = solve_family_I(3.0, -2.8, 2.0, 0.5)
    fields = sample_fields(rec, default_grid(rec.beta, 2048))
    saved = dynamics.nonlinear_step
    dynamics.nonlinear_step = step
    try:
        start = time.perf_counter()
        evolve(fields, rec.params, PropagatorConfig(dt=1e-3, T=1.0))
        return time.perf_counter() - start
    finally:
        dynamics.nonlinear_step = saved


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2048)
    ap.add_argument("--reps", type=int, default=2000)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    pa = rng.standard_normal(args.n) + 1j * rng.standard_normal(args.n)
    pm = rng.standard_normal(args.n) + 1j * rng.standard_normal(args.n)

    rows = [("python", time_step(_kernels_py.nonlinear_step, pa, pm, args.reps),
             time_evolve(_kernels_py.nonlinear_step))]
    if _kernels.KERNEL_BACKEND == "compiled":
        rows.append(("compiled",
                     time_step(_kernels.nonlinear_step, pa, pm, args.reps),
                     time_evolve(_kernels.nonlinear_step)))
    else:
        print("compiled kernel unavailable; showing the fallback only")

    print(f"n = {args.n}, {args.reps} reps; evolve: T=1, dt=1e-3, n=2048")
    print(f"{'backend':<10} {'step us':>10} {'evolve s':>10}")
    for name, per_step, wall in rows:
        print(f"{name:<10} {per_step * 1e6:>10.1f} {wall:>10.2f}")
    if len(rows) == 2:
        print(f"step speedup: {rows[0][1] / rows[1][1]:.1f}x, "
              f"evolve speedup: {rows[0][2] / rows[1][2]:.2f}x")


if __name__ == "__main__":
    main()
