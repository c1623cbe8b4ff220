#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeats N]

Times the two hot kernels (Levenshtein alignment counts and the SGD layout
loop) on identical inputs with both backends, verifies the results agree,
and prints a small table with the speedup. If the compiled extensions are
not built, only the fallback rows are shown.
"""

import argparse
import time

import numpy as np

from legaltopics._kernels import fallback

try:
    from legaltopics._kernels import _edit_c, _layout_c
    COMPILED = True
except ImportError:
    _edit_c = _layout_c = None
    COMPILED = False


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return min(times), result


def bench_edit(repeats):
    rng = np.random.default_rng(0)
    pairs = []
    for _ in range(200):
        ref = rng.integers(0, 30, size=rng.integers(50, 400)).tolist()
        hyp = rng.integers(0, 30, size=rng.integers(50, 400)).tolist()
        pairs.append((ref, hyp))

    def run(kernel):
        return [kernel(r, h) for r, h in pairs]

    t_py, out_py = best_of(lambda: run(fallback.edit_counts_kernel), repeats)
    row = [("edit distance (200 pairs)", "python", t_py, "")]
    if COMPILED:
        t_c, out_c = best_of(lambda: run(_edit_c.edit_counts_kernel), repeats)
        assert out_c == out_py, "backend results diverge"
        row.append(("edit distance (200 pairs)", "compiled", t_c,
                    f"{t_py / t_c:.1f}x"))
    return row


def bench_layout(repeats):
    rng = np.random.default_rng(1)
    n, dim, n_edges = 400, 5, 4000
    heads = rng.integers(0, n, n_edges).astype(np.int64)
    tails = rng.integers(0, n, n_edges).astype(np.int64)
    weights = rng.uniform(0.05, 1.0, n_edges)
    eps = weights.max() / weights
    init = rng.uniform(-10, 10, size=(n, dim))

    def run(kernel):
        layout = init.copy()
        kernel(layout, heads, tails, eps, 200, n, 1.929, 0.7915, 1.0, 1.0,
               5, 12345)
        return layout

    t_py, out_py = best_of(lambda: run(fallback.optimize_layout_kernel),
                           repeats)
    row = [("layout SGD (400 pts, 200 epochs)", "python", t_py, "")]
    if COMPILED:
        t_c, out_c = best_of(
            lambda: run(_layout_c.optimize_layout_kernel), repeats)
        # both backends share one RNG and schedule, so outputs match exactly
        assert np.array_equal(out_c, out_py), "backend results diverge"
        row.append(("layout SGD (400 pts, 200 epochs)", "compiled", t_c,
                    f"{t_py / t_c:.1f}x"))
    return row


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3,
                        help="best-of-N timing (default 3)")
    args = parser.parse_args()

    if not COMPILED:
        print("note: compiled extensions unavailable, timing fallback only")
    rows = bench_edit(args.repeats) + bench_layout(args.repeats)
    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'backend':<8}  {'seconds':>9}  speedup")
    for name, backend, secs, speedup in rows:
        print(f"{name:<{width}}  {backend:<8}  {secs:>9.4f}  {speedup}")


if __name__ == "__main__":
    main()
