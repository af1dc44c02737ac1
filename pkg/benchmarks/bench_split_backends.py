#!/usr/bin/env python3
"""Benchmark the compiled split kernel against the pure-Python fallback.

Times the raw best-split search and full forest training on synthetic design
matrices shaped like the pipeline's output (a few hundred one-hot columns,
a handful of numerics). Run after building the extension in place:

    python setup.py build_ext --inplace
    python benchmarks/bench_split_backends.py
"""

from __future__ import annotations

import time

import numpy as np

from ransomrisk.forest.backend import available_backends
from ransomrisk.forest.trees import grow_tree, max_features_for


def synthetic_matrix(n_rows: int, n_onehot: int, n_numeric: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    X = np.zeros((n_rows, n_onehot + n_numeric))
    X[np.arange(n_rows), rng.integers(0, n_onehot, n_rows)] = 1.0
    X[:, n_onehot:] = rng.normal(size=(n_rows, n_numeric)) * [1000, 100, 2, 5][:n_numeric]
    y = (rng.random(n_rows) < 0.5).astype(np.int8)
    # Make the labels learnable so trees develop realistic depth.
    y[X[:, n_onehot] > 500] = 1
    return np.ascontiguousarray(X), y


def time_kernel(kernel, X, y, repeats: int = 200) -> float:
    n, w = X.shape
    idx = np.arange(n, dtype=np.int64)
    cols = np.arange(w, dtype=np.int64)
    started = time.perf_counter()
    for _ in range(repeats):
        kernel(X, y, idx, cols, 1)
    return (time.perf_counter() - started) / repeats


def time_training(kernel, X, y, n_trees: int = 20) -> float:
    started = time.perf_counter()
    for t in range(n_trees):
        rng = np.random.default_rng([42, t])
        sample = rng.integers(0, X.shape[0], X.shape[0])
        grow_tree(np.ascontiguousarray(X[sample]), y[sample], rng,
                  max_features=max_features_for(X.shape[1]), split_fn=kernel)
    return time.perf_counter() - started


def main() -> None:
    backends = available_backends()
    if "cython" not in backends:
        print("compiled kernel not built; run `python setup.py build_ext --inplace`")

    scenarios = [
        ("node scan  1k x 64", *synthetic_matrix(1_000, 60, 4)),
        ("node scan  8k x 256", *synthetic_matrix(8_000, 252, 4)),
    ]
    print(f"{'scenario':<22}" + "".join(f"{name:>14}" for name in backends))
    for label, X, y in scenarios:
        timings = [time_kernel(kernel, X, y, repeats=30) for kernel in backends.values()]
        cells = "".join(f"{t * 1e3:>11.2f} ms" for t in timings)
        print(f"{label:<22}{cells}")

    X, y = synthetic_matrix(2_000, 120, 4)
    print(f"\n{'20-tree forest, 2k rows':<22}")
    reference = None
    for name, kernel in backends.items():
        elapsed = time_training(kernel, X, y, n_trees=20)
        speedup = "" if reference is None else f"  ({reference / elapsed:.1f}x vs python)"
        if name == "python":
            reference = elapsed
        print(f"  {name:<10}{elapsed:>8.2f} s{speedup}")


if __name__ == "__main__":
    main()
