"""Backend equivalence: the compiled kernels must return bit-identical
results to the pure-Python reference on every operation."""

import numpy as np
import pytest

from ir2emo import kernels

try:
    compiled = kernels.get_backend("compiled")
except ImportError:
    compiled = None
pure = kernels.get_backend("python")

needs_compiled = pytest.mark.skipif(compiled is None,
                                    reason="compiled backend not built")


def _random_order(X):
    return np.vstack([np.argsort(X[:, f], kind="stable")
                      for f in range(X.shape[1])]).astype(np.int32)


@needs_compiled
class TestBackendBitIdentity:
    def test_nd_ranks(self):
        rng = np.random.default_rng(1)
        for n, M in [(1, 2), (40, 2), (90, 3), (60, 5)]:
            F = rng.random((n, M))
            np.testing.assert_array_equal(pure.nd_ranks(F), compiled.nd_ranks(F))

    def test_nd_ranks_with_duplicates(self):
        rng = np.random.default_rng(2)
        F = np.round(rng.random((50, 3)), 1)
        np.testing.assert_array_equal(pure.nd_ranks(F), compiled.nd_ranks(F))

    @pytest.mark.parametrize("kind", [kernels.ASF, kernels.PDM, kernels.PBI])
    def test_scalarize_argmin(self, kind):
        rng = np.random.default_rng(3)
        FB = rng.random((40, 4)) * 2 - 0.5
        Z = rng.random((25, 4)) + 0.01
        i1, v1 = pure.scalarize_argmin(FB, Z, kind, 5.0)
        i2, v2 = compiled.scalarize_argmin(FB, Z, kind, 5.0)
        np.testing.assert_array_equal(i1, i2)
        np.testing.assert_array_equal(v1, v2)

    @pytest.mark.parametrize("M", [2, 3, 4, 5])
    def test_hv_exact(self, M):
        rng = np.random.default_rng(M)
        for _ in range(15):
            F = rng.random((25, M))
            F = F[pure.nd_ranks(F) == 0]
            ref = np.full(M, 1.1)
            F = F[np.all(F < ref, axis=1)]
            assert pure.hv_exact(F, ref) == compiled.hv_exact(F, ref)

    def test_hv_exact_with_ties(self):
        F = np.array([[0.2, 0.5, 0.2], [0.2, 0.3, 0.6], [0.5, 0.2, 0.4]])
        ref = np.ones(3)
        assert pure.hv_exact(F, ref) == compiled.hv_exact(F, ref)

    def test_trees_and_predict(self):
        rng = np.random.default_rng(4)
        for trial in range(25):
            n = int(rng.integers(1, 70))
            p = int(rng.integers(1, 9))
            q = int(rng.integers(1, 12))
            X = rng.random((n, p))
            if trial % 3 == 0:
                X = np.round(X, 1)  # force tied feature values
            Y = rng.random((n, q))
            order = _random_order(X)
            t1 = pure.build_tree(X, Y, order, 2, 1, -1)
            t2 = compiled.build_tree(X, Y, order, 2, 1, -1)
            for a, b in zip(t1, t2):
                np.testing.assert_array_equal(a, b)
            Xq = rng.random((12, p)) * 1.5 - 0.25
            np.testing.assert_array_equal(pure.tree_predict(Xq, *t1),
                                          compiled.tree_predict(Xq, *t2))

    def test_tree_depth_and_min_split_knobs(self):
        rng = np.random.default_rng(5)
        X = rng.random((40, 4))
        Y = rng.random((40, 3))
        order = _random_order(X)
        for min_split, min_leaf, max_depth in [(5, 2, -1), (2, 1, 3), (10, 4, 2)]:
            t1 = pure.build_tree(X, Y, order, min_split, min_leaf, max_depth)
            t2 = compiled.build_tree(X, Y, order, min_split, min_leaf, max_depth)
            for a, b in zip(t1, t2):
                np.testing.assert_array_equal(a, b)


class TestPureKernelBasics:
    def test_nd_ranks_fronts(self):
        F = np.array([[1.0, 1.0], [2.0, 2.0], [0.5, 3.0], [3.0, 3.0]])
        ranks = pure.nd_ranks(F)
        assert ranks.tolist() == [0, 1, 0, 2]

    def test_hv_known_value(self):
        F = np.array([[0.25, 0.75], [0.75, 0.25]])
        assert pure.hv_exact(F, np.array([1.0, 1.0])) == 0.3125

    def test_backend_selected(self):
        assert kernels.BACKEND in ("compiled", "python")
