"""Benchmark the compiled kernel core against the pure-Python fallback.

Covers the four hot kernels (non-dominated sorting, scalarized association,
exact hypervolume, CART tree build/predict) plus an end-to-end forest fit.
Results of both backends are checked for bit-identity while timing.

Usage: python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from ir2emo.kernels import get_backend


def timeit(fn, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def compare(name, make_args, call, repeats, check=None, pure_repeats=None):
    try:
        fast = get_backend("compiled")
    except ImportError:
        print(f"{name:<28s} compiled backend missing; skipping")
        return
    pure = get_backend("python")
    args = make_args()
    t_fast, r_fast = timeit(lambda: call(fast, *args), repeats)
    t_pure, r_pure = timeit(lambda: call(pure, *args), pure_repeats or repeats)
    same = check(r_fast, r_pure) if check else True
    speedup = t_pure / t_fast if t_fast > 0 else float("inf")
    flag = "" if same else "  RESULTS DIFFER!"
    print(f"{name:<28s} compiled {t_fast * 1e3:9.2f} ms   "
          f"python {t_pure * 1e3:10.2f} ms   speedup {speedup:7.1f}x{flag}")


def arrays_equal(a, b):
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b) if isinstance(a, np.ndarray) else a == b


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    rng = np.random.default_rng(0)
    r = args.repeats

    F = rng.random((600, 3))
    compare("nd_ranks 600x3", lambda: (F,),
            lambda k, F_: k.nd_ranks(F_), r, arrays_equal)

    FB = rng.random((600, 3))
    Z = rng.random((105, 3)) + 0.01
    compare("scalarize_argmin 600x105", lambda: (FB, Z),
            lambda k, a, b: k.scalarize_argmin(a, b, 1, 5.0), r, arrays_equal)

    front = rng.random((300, 4))
    from ir2emo.kernels import nd_ranks

    front = front[nd_ranks(front) == 0]
    ref = np.full(4, 1.1)
    compare(f"hv_exact {front.shape[0]}x4", lambda: (front, ref),
            lambda k, f, rr: k.hv_exact(f, rr), r,
            lambda a, b: a == b)

    n, p = 600, 30
    Xb = rng.random((n, p))
    Yb = rng.random((n, p))
    order = np.ascontiguousarray(
        np.argsort(Xb, axis=0, kind="stable").T.astype(np.int32))
    compare("build_tree 600x30->30", lambda: (Xb, Yb, order),
            lambda k, X_, Y_, o: k.build_tree(X_, Y_, o, 2, 1, -1), r,
            arrays_equal, pure_repeats=1)

    tree = get_backend("python").build_tree(Xb, Yb, order, 2, 1, -1)
    Xq = rng.random((500, p))
    compare("tree_predict 500 queries", lambda: (Xq,) + tree,
            lambda k, *a: k.tree_predict(*a), r, arrays_equal)

    # end-to-end forest fit through whichever backend is active
    import os

    from ir2emo import forest as rf
    from ir2emo.core import RandomSource

    data = rf.TrainingDataset(rng.random((300, 30)), rng.random((300, 30)))
    params = rf.ForestParams.for_dataset(data)
    t0 = time.perf_counter()
    rf.fit(data, params, RandomSource(1))
    active = "python" if os.environ.get("IR2EMO_PURE_PYTHON") == "1" else "active"
    print(f"forest fit 300 trees ({active} backend): "
          f"{time.perf_counter() - t0:.2f} s")


if __name__ == "__main__":
    main()
