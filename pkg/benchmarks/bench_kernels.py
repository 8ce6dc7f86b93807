"""Benchmark the compiled scan kernel against the numpy fallback.

Runs the Bloch-sphere margin scan (the hot loop of composite membership
and positivity searches) on realistic witness workloads, then times one
full end-to-end membership check per backend.

Usage: python benchmarks/bench_kernels.py [--grid 180] [--repeats 50]
"""

import argparse
import importlib
import time

import numpy as np


def _load_backends():
    backends = {}
    scan_py = importlib.import_module("witworld._kernels._scan_py")
    backends["python"] = scan_py.bloch_margin_scan
    try:
        scan_cy = importlib.import_module("witworld._kernels._scan_cy")
        backends["cython"] = scan_cy.bloch_margin_scan
    except ImportError:
        pass
    return backends


def _bench_scan(fn, mats, points, repeats):
    # warm up
    fn(mats[0], points)
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        for m in mats:
            fn(m, points)
        best = min(best, time.perf_counter() - t0)
    return best / len(mats)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--grid", type=int, default=180)
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--mats", type=int, default=20)
    args = parser.parse_args()

    from witworld.compose import _sphere_grid

    _, points = _sphere_grid(args.grid)
    rng = np.random.default_rng(0)
    mats = [np.ascontiguousarray(rng.normal(size=(4, 4))) for _ in range(args.mats)]

    backends = _load_backends()
    print(f"scan kernel: {points.shape[0]} grid points, {args.mats} matrices, "
          f"best of {args.repeats} repeats")
    results = {}
    for name, fn in backends.items():
        per_scan = _bench_scan(fn, mats, points, args.repeats)
        results[name] = per_scan
        print(f"  {name:>7}: {per_scan * 1e3:8.3f} ms per scan")
    if {"python", "cython"} <= set(results):
        print(f"  speedup: {results['python'] / results['cython']:.1f}x")
        # both backends must agree on value and argmin
        for m in mats:
            v1, i1 = backends["python"](m, points)
            v2, i2 = backends["cython"](m, points)
            assert abs(v1 - v2) < 1e-12 and i1 == i2
        print("  agreement: values and argmins identical")

    # end-to-end: one composite membership check of a random witness
    import witworld as ww
    from witworld._kernels import BACKEND

    w = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    w = w @ w.conj().T
    w = w / np.trace(w).real
    vec = ww.hermitian_tensor_to_vector(w, (2, 2))
    t0 = time.perf_counter()
    for _ in range(10):
        ww.composite_state_check(vec, ww.SearchConfig(grid=args.grid))
    dt = (time.perf_counter() - t0) / 10
    print(f"end-to-end composite membership ({BACKEND} backend): {dt * 1e3:.2f} ms "
          f"per check at grid {args.grid}")
    print("set WITWORLD_FORCE_PY_KERNELS=1 to repeat with the numpy backend")


if __name__ == "__main__":
    main()
