#!/usr/bin/env python3
"""Benchmark the compiled hot-kernel core against the numpy fallback.

Times the two backend primitives on grid-oracle and vertex-enumeration sized
workloads, plus end-to-end operations that are dominated by them. Run from
the repo root after `python setup.py build_ext --inplace`:

    python benchmarks/bench_backends.py
"""
import itertools
import time

import numpy as np

import ratepriv._backend as backend_mod
from ratepriv import JointDistribution, g0, g_eps_oracle
from ratepriv import _numpycore

try:
    from ratepriv import _fastcore
except ImportError:
    _fastcore = None


def timeit(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def row(label, numpy_s, compiled_s):
    if compiled_s is None:
        print(f"{label:<44s} {numpy_s * 1e3:>10.1f} ms {'-':>12s} {'-':>9s}")
    else:
        print(
            f"{label:<44s} {numpy_s * 1e3:>10.1f} ms {compiled_s * 1e3:>9.1f} ms "
            f"{numpy_s / compiled_s:>8.1f}x"
        )


def with_backend(impl, fn):
    """Run fn with the given backend implementation patched in."""
    saved = (backend_mod.batch_filter_objectives, backend_mod.solve_bases)
    backend_mod.batch_filter_objectives = impl.batch_filter_objectives
    backend_mod.solve_bases = impl.solve_bases
    try:
        return fn()
    finally:
        backend_mod.batch_filter_objectives, backend_mod.solve_bases = saved


def main():
    rng = np.random.default_rng(0)
    print(f"{'workload':<44s} {'numpy':>13s} {'compiled':>12s} {'speedup':>9s}")

    # grid-oracle sized batch: 200k candidate filters on a 2x3 joint
    pxy = rng.dirichlet(np.ones(6)).reshape(2, 3)
    filters = np.ascontiguousarray(rng.dirichlet(np.ones(3), size=(200_000, 3)))
    t_np = timeit(lambda: _numpycore.batch_filter_objectives(pxy, filters))
    t_cy = timeit(lambda: _fastcore.batch_filter_objectives(pxy, filters)) if _fastcore else None
    row("batch objectives (200k filters, y=3 z=3)", t_np, t_cy)

    # vertex-enumeration sized basis solving: C(20,14) = 38760 bases
    a = rng.normal(size=(14, 20))
    b = rng.normal(size=14)
    combos = np.array(list(itertools.combinations(range(20), 14)), dtype=np.int64)
    t_np = timeit(lambda: _numpycore.solve_bases(a, b, combos))
    t_cy = timeit(lambda: _fastcore.solve_bases(a, b, combos)) if _fastcore else None
    row("basis solving (38760 bases, 14x14)", t_np, t_cy)

    # end-to-end: grid oracle on a 2x2 joint at resolution 25
    j22 = JointDistribution(rng.dirichlet(np.ones(4)).reshape(2, 2))
    oracle = lambda: g_eps_oracle(j22, 0.05, resolution=25, z_card=3)
    t_np = with_backend(_numpycore, lambda: timeit(oracle, repeats=2))
    t_cy = with_backend(_fastcore, lambda: timeit(oracle, repeats=2)) if _fastcore else None
    row("end-to-end grid oracle (2x2, res 25)", t_np, t_cy)

    # end-to-end: perfect-privacy vertex enumeration on a duplicated-posterior
    # 4x4 joint at the Caratheodory cardinality (the heaviest g0 shape)
    base = rng.dirichlet(np.ones(12)).reshape(4, 3)
    probs = np.column_stack([base[:, 0] * 0.4, base[:, 0] * 0.6, base[:, 1:]])
    j44 = JointDistribution(probs / probs.sum())
    vertex = lambda: g0(j44, 5)
    t_np = with_backend(_numpycore, lambda: timeit(vertex, repeats=2))
    t_cy = with_backend(_fastcore, lambda: timeit(vertex, repeats=2)) if _fastcore else None
    row("end-to-end g0 vertices (4x4 dup, z=5)", t_np, t_cy)

    if _fastcore is None:
        print("\ncompiled core not built; run `python setup.py build_ext --inplace`")


if __name__ == "__main__":
    main()
