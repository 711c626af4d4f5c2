"""Compare the compiled and pure-Python integration kernels.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5] [--grid 12]

Times one monodromy per curve family and a small stability sweep with each
available backend, and checks that both backends give the same answers.
"""
import argparse
import math
import time

import numpy as np

from moebius_floquet.floquet import IntegratorOptions, monodromy, monodromy_fixed_step
from moebius_floquet.kernels import available_backends
from moebius_floquet.modulation import circular, elliptical, quadratic_pair, rectangular
from moebius_floquet.sweep import Axis, SweepSpec, run_sweep

CURVES = {
    "circular": circular(0.7 + 0.25j, 1.36),
    "elliptical": elliptical(2.0, 1.0, 0.8, math.pi / 2),
    "quadratic": quadratic_pair(1.2 + 0.3j),
    "rectangular": rectangular(2.394756696, 2.1, 0.55),
}


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--grid", type=int, default=12, help="sweep grid is grid x grid cells")
    args = ap.parse_args(argv)

    backends = available_backends()
    rows, results = [], {}
    for name, curve in CURVES.items():
        for be in backends:
            opts = IntegratorOptions(backend=be)
            t, m = best_of(lambda: monodromy(curve, opts), args.repeat)
            rows.append((f"monodromy {name}", be, t))
            results[("adaptive", name, be)] = m.m
        for be in backends:
            t, m = best_of(lambda: monodromy_fixed_step(curve, 10_000, backend=be), 1)
            rows.append((f"rk4 10k {name}", be, t))
            results[("rk4", name, be)] = m.m
    for be in backends:
        spec = SweepSpec("elliptical", Axis(-1, 6, args.grid), Axis(0, 4, args.grid), alpha=0.5,
                         options=IntegratorOptions(backend=be))
        t, g = best_of(lambda: run_sweep(spec, 1), 1)
        rows.append((f"sweep {args.grid}x{args.grid}", be, t))
        results[("sweep", be)] = g.classes

    print(f"{'case':28s} {'backend':8s} {'seconds':>10s} {'speed-up':>9s}")
    base = {case: t for case, be, t in rows if be == "python"}
    for case, be, t in rows:
        print(f"{case:28s} {be:8s} {t:10.5f} {base[case] / t:9.1f}")

    if len(backends) == 2:
        for name in CURVES:
            for kind in ("adaptive", "rk4"):
                a, b = results[(kind, name, "cython")], results[(kind, name, "python")]
                d = np.linalg.norm(a - b) / np.linalg.norm(b)
                print(f"backend difference {kind:8s} {name:12s} {d:.1e}")
        same = np.array_equal(results[("sweep", "cython")], results[("sweep", "python")])
        print(f"sweep classes identical across backends: {same}")


if __name__ == "__main__":
    main()
