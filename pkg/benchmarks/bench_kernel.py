"""Benchmark the compiled generator kernel against the numpy fallback.

Times the raw matvec and a full oracle propagation with each backend.
Run: python benchmarks/bench_kernel.py
"""

import importlib
import os
import sys
import time

import numpy as np


def load_backend(force_python: bool):
    os.environ.pop("ZENOCOUPLER_FORCE_PY_KERNEL", None)
    if force_python:
        os.environ["ZENOCOUPLER_FORCE_PY_KERNEL"] = "1"
    for name in list(sys.modules):
        if name.startswith("zenocoupler"):
            del sys.modules[name]
    return importlib.import_module("zenocoupler")


def bench_matvec(zc, shape=(21, 21, 13), repeats=2000):
    rng = np.random.default_rng(7)
    x = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    x = np.ascontiguousarray(x)
    out = np.empty_like(x)
    from zenocoupler.kernels import apply_generator

    da, d1, d2 = shape
    sa = np.sqrt(np.arange(da, dtype=float))
    s1 = np.sqrt(np.arange(d1, dtype=float))
    s2 = np.sqrt(np.arange(d2, dtype=float))
    j = np.arange(d1, dtype=float)
    w1 = np.sqrt((j + 1) * (j + 2))
    apply_generator(x, out, -0.1 + 0j, -0.001 + 0j, sa, s1, s2, w1)  # warm up
    t0 = time.perf_counter()
    for _ in range(repeats):
        apply_generator(x, out, -0.1 + 0j, -0.001 + 0j, sa, s1, s2, w1)
    return (time.perf_counter() - t0) / repeats


def bench_propagate(zc):
    params = zc.CouplerParams(k=0.1, gamma_nl=1e-3, delta_k=1e-4)
    inputs = zc.CoherentInputs(alpha=1.0, beta=1.0, gamma=0.5)
    trunc = zc.TruncationSpec(12, 12, 8)
    t0 = time.perf_counter()
    report = zc.propagate(params, inputs, 50.0, trunc, fixed_steps=256)
    elapsed = time.perf_counter() - t0
    return elapsed, zc.mode_expectations(report.final_state)[2]


def main():
    results = {}
    for force_py in (False, True):
        zc = load_backend(force_py)
        backend = zc.KERNEL_BACKEND
        mv = bench_matvec(zc)
        prop, nb2 = bench_propagate(zc)
        results[backend] = (mv, prop, nb2)
        print(f"{backend:>7}: matvec {mv * 1e6:8.1f} us   "
              f"propagate(256 steps) {prop:6.3f} s   <N_b2> = {nb2:.12f}")
    if len(results) == 2:
        c, p = results["cython"], results["python"]
        print(f"speedup: matvec x{p[0] / c[0]:.1f}, propagate x{p[1] / c[1]:.1f}")
        print(f"<N_b2> agreement: {abs(c[2] - p[2]):.3e}")


if __name__ == "__main__":
    main()
