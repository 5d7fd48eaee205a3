#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallbacks.

Runs each hot kernel on representative workloads (the 16x16 panel and the
1-degree extraction grid used by the default scenarios) and prints a
timing table. The two paths may differ in the last bits (different
summation orders); the check column reports the max relative deviation.

Usage:
    python benchmarks/bench_kernels.py [--repeats N]

The active backend for the library itself is chosen at import time via
CROSSPANEL_BACKEND; this script imports both implementations directly and
is unaffected by the flag.
"""

import argparse
import time

import numpy as np

from crosspanel import _kernels
from crosspanel._kernels import (
    _py_corr_grid_scores,
    _py_corr_point,
    _py_spherical_entries,
)


def _numba_impls():
    try:
        from crosspanel._kernels import (
            _nb_corr_grid_scores,
            _nb_corr_point,
            _nb_spherical_entries,
        )
    except ImportError:
        return None
    return _nb_corr_grid_scores, _nb_corr_point, _nb_spherical_entries


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    h2 = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))

    thetas = np.radians(np.arange(-90.0, 90.5, 1.0))
    phis = np.radians(np.arange(0.0, 360.0, 1.0))
    w_grid = np.sin(thetas)
    u_grid = np.cos(thetas)[:, None] * np.sin(phis)[None, :]

    positions = rng.normal(size=(512, 3))
    source = np.array([500.0, 20.0, -3.0])
    lam = 0.0107

    uw_points = rng.uniform(-1, 1, size=(2000, 2))

    cases = {
        "corr_grid_scores (181x360 grid, 16x16 panel)": (
            lambda f: f(h2, w_grid, u_grid),
            _py_corr_grid_scores,
        ),
        "corr_point (2000 single evaluations)": (
            lambda f: [f(h2, u, w) for u, w in uw_points],
            _py_corr_point,
        ),
        "spherical_entries (512 elements x 200 sources)": (
            lambda f: [f(positions, source + np.array([i, 0.0, 0.0]), lam) for i in range(200)],
            _py_spherical_entries,
        ),
    }

    nb = _numba_impls()
    print(f"active library backend: {_kernels.BACKEND}")
    if nb is None:
        print("numba backend unavailable; timing the numpy path only\n")
    else:
        for fn in nb:  # compile outside the timed region
            if fn.__name__.endswith("grid_scores"):
                fn(h2, w_grid[:2], u_grid[:2, :2])
            elif fn.__name__.endswith("corr_point"):
                fn(h2, 0.0, 0.0)
            else:
                fn(positions, source, lam)
        print()

    header = f"{'kernel':<50} {'numpy':>10} {'numba':>10} {'speedup':>8} {'max rel diff':>13}"
    print(header)
    print("-" * len(header))
    for name, (runner, py_impl) in cases.items():
        t_py = _time(lambda: runner(py_impl), args.repeats)
        if nb is None:
            print(f"{name:<50} {t_py * 1e3:>8.2f}ms {'-':>10} {'-':>8} {'-':>13}")
            continue
        nb_impl = {
            "corr_grid_scores": nb[0], "corr_point": nb[1], "spherical_entries": nb[2],
        }[name.split(" ")[0]]
        t_nb = _time(lambda: runner(nb_impl), args.repeats)
        ref = np.asarray(runner(py_impl), dtype=complex)
        got = np.asarray(runner(nb_impl), dtype=complex)
        diff = float(np.max(np.abs(got - ref) / np.maximum(np.abs(ref), 1e-300)))
        print(f"{name:<50} {t_py * 1e3:>8.2f}ms {t_nb * 1e3:>8.2f}ms {t_py / t_nb:>7.1f}x {diff:>12.2e}")


if __name__ == "__main__":
    main()
