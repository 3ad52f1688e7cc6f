"""Performance indicators: hypervolume (vs a Monte-Carlo oracle), GD/IGD,
recovery savings, and the rank-sum test (vs scipy as an oracle)."""

import math

import numpy as np
import pytest
import scipy.stats

from ir2emo import kernels
from ir2emo.core import ContractViolation, UnsupportedError
from ir2emo.metrics import (
    HvProtocol,
    gd_igd,
    hv_reference,
    hypervolume,
    median_low,
    recovery_savings,
    wilcoxon_ranksum,
)


def mc_hypervolume(front, ref, n_samples, seed):
    """Monte-Carlo oracle: uniform sampling over [min(front), ref]."""
    front = np.atleast_2d(front)
    rng = np.random.default_rng(seed)
    lo = front.min(axis=0)
    vol_box = float(np.prod(ref - lo))
    hits = 0
    done = 0
    while done < n_samples:
        chunk = min(200_000, n_samples - done)
        pts = rng.uniform(lo, ref, size=(chunk, front.shape[1]))
        dominated = np.zeros(chunk, dtype=bool)
        for row in front:
            dominated |= np.all(row <= pts, axis=1)
        hits += int(dominated.sum())
        done += chunk
    p = hits / n_samples
    sigma = math.sqrt(max(p * (1 - p), 1e-12) / n_samples) * vol_box
    return p * vol_box, sigma


def random_nd_front(rng, n, M):
    F = rng.random((n * 3, M))
    F = F[kernels.nd_ranks(F) == 0]
    return F[:n]


class TestHypervolume:
    def test_single_box(self):
        assert hypervolume([[0.5, 0.5]], [1.0, 1.0]) == 0.25

    def test_two_boxes_exact(self):
        assert hypervolume([[0.25, 0.75], [0.75, 0.25]], [1.0, 1.0]) == 0.3125

    def test_empty_front(self):
        assert hypervolume(np.empty((0, 2)), [1.0, 1.0]) == 0.0

    def test_points_not_dominating_ref_are_discarded(self):
        assert hypervolume([[0.5, 1.5], [2.0, 0.1]], [1.0, 1.0]) == 0.0

    def test_dominated_point_contributes_nothing(self):
        base = hypervolume([[0.25, 0.25]], [1.0, 1.0])
        with_dup = hypervolume([[0.25, 0.25], [0.5, 0.5]], [1.0, 1.0])
        assert base == with_dup

    def test_monotone_under_nondominated_addition(self):
        rng = np.random.default_rng(0)
        ref = np.full(3, 1.1)
        F = random_nd_front(rng, 10, 3)
        v1 = hypervolume(F, ref)
        extra = np.vstack([F, [[0.01, 0.01, 0.01]]])
        assert hypervolume(extra, ref) >= v1

    def test_m_above_five_unsupported(self):
        with pytest.raises(UnsupportedError):
            hypervolume(np.zeros((1, 6)), np.ones(6))

    @pytest.mark.parametrize("M", [2, 3, 4, 5])
    def test_against_monte_carlo_oracle_quick(self, M):
        rng = np.random.default_rng(M * 7)
        ref = np.full(M, 1.1)
        for trial in range(3):
            F = random_nd_front(rng, 12, M)
            exact = hypervolume(F, ref)
            est, sigma = mc_hypervolume(F, ref, 200_000, seed=trial)
            assert abs(exact - est) <= 4 * sigma + 1e-9


class TestHvReference:
    def test_formula(self):
        np.testing.assert_allclose(hv_reference(100, 2), [100 / 99] * 2)

    def test_small_population(self):
        np.testing.assert_array_equal(hv_reference(2, 3), [2.0, 2.0, 2.0])

    def test_monotone_decrease_toward_one(self):
        values = [hv_reference(N, 1)[0] for N in (2, 10, 100, 10_000)]
        assert all(a > b > 1.0 for a, b in zip(values, values[1:]))

    def test_invalid(self):
        with pytest.raises(ContractViolation):
            hv_reference(1, 2)


class TestHvProtocol:
    def test_wfg_normalization(self):
        proto = HvProtocol.for_run(3, 2, "WFG")
        # point (1, 2) -> normalized (0.5, 0.5); ref = 1.5
        assert proto.value([[1.0, 2.0]]) == 1.0

    def test_non_wfg_passthrough(self):
        proto = HvProtocol.for_run(3, 2, None)
        assert proto.value([[0.5, 0.5]]) == 1.0


class TestGdIgd:
    def test_subset_gives_zero_gd(self):
        R = np.array([[0.0, 1.0], [0.5, 0.5], [1.0, 0.0]])
        assert gd_igd(R[:2], R, "GD") == 0.0

    def test_superset_gives_zero_igd(self):
        R = np.array([[0.0, 1.0], [0.5, 0.5]])
        F = np.vstack([R, [[2.0, 2.0]]])
        assert gd_igd(F, R, "IGD") == 0.0

    def test_single_point_distance(self):
        R = np.array([[0.0, 0.0]])
        assert gd_igd(np.array([[0.1, 0.0]]), R, "GD") == pytest.approx(0.1)

    def test_scale_covariance(self):
        rng = np.random.default_rng(1)
        F = rng.random((8, 2))
        R = rng.random((30, 2))
        for lam in (0.5, 3.0):
            assert gd_igd(lam * F, lam * R, "IGD") == \
                pytest.approx(lam * gd_igd(F, R, "IGD"), rel=1e-12)

    def test_validation(self):
        with pytest.raises(ContractViolation):
            gd_igd(np.empty((0, 2)), np.ones((1, 2)), "GD")
        with pytest.raises(ContractViolation):
            gd_igd(np.ones((1, 2)), np.ones((1, 2)), "XX")


class TestRecoverySavings:
    def _series(self, reach_at, value=0.5, length=120):
        s = np.zeros(length)
        s[reach_at:] = value
        return s

    def test_positive_savings(self):
        r = recovery_savings(self._series(55), 0.5, 40)
        assert (r.recovery, r.savings_pct) == (55, pytest.approx(37.5))
        assert r.formatted() == "37.5"

    def test_zero_savings(self):
        r = recovery_savings(self._series(40), 0.5, 40)
        assert (r.recovery, r.savings_pct) == (40, 0.0)

    def test_negative_savings(self):
        r = recovery_savings(self._series(39), 0.5, 40)
        assert (r.recovery, r.savings_pct) == (39, pytest.approx(-2.5))

    def test_never_recovered_is_censored(self):
        r = recovery_savings(np.zeros(101), 0.5, 40)
        assert math.isinf(r.recovery)
        assert r.censored
        assert r.savings_pct == pytest.approx(100 * (100 - 40) / 40)
        assert r.formatted().startswith("> ")

    def test_first_crossing_semantics(self):
        s = np.array([0.0, 0.2, 0.6, 0.1, 0.9])
        assert recovery_savings(s, 0.5, 1).recovery == 2

    def test_t_zero_rejected(self):
        with pytest.raises(ContractViolation):
            recovery_savings(np.ones(5), 0.5, 0)


class TestWilcoxon:
    def test_identical_samples(self):
        assert wilcoxon_ranksum([1, 2, 3], [1, 2, 3]) >= 0.9

    def test_exact_three_vs_three(self):
        assert wilcoxon_ranksum([1, 2, 3], [10, 11, 12]) == pytest.approx(0.1)

    def test_symmetry(self):
        a = [1.0, 5.0, 2.0, 8.0]
        b = [3.0, 9.0, 4.0]
        assert wilcoxon_ranksum(a, b) == pytest.approx(wilcoxon_ranksum(b, a))

    def test_one_sided_direction(self):
        lo = [1, 2, 3, 4]
        hi = [10, 11, 12, 13]
        assert wilcoxon_ranksum(hi, lo, "greater") < 0.05
        assert wilcoxon_ranksum(hi, lo, "less") > 0.9

    def test_exact_against_scipy(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            a = rng.random(6)
            b = rng.random(7) + rng.uniform(-0.3, 0.3)
            mine = wilcoxon_ranksum(a, b)
            ref = scipy.stats.mannwhitneyu(a, b, alternative="two-sided",
                                           method="exact").pvalue
            assert mine == pytest.approx(ref, abs=1e-12)

    def test_approx_against_scipy(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            a = rng.normal(0, 1, 25)
            b = rng.normal(0.5, 1, 30)
            mine = wilcoxon_ranksum(a, b)
            ref = scipy.stats.ranksums(a, b).pvalue
            assert mine == pytest.approx(ref, rel=1e-9)

    def test_approx_with_ties_against_scipy(self):
        rng = np.random.default_rng(4)
        a = np.round(rng.random(20), 1)
        b = np.round(rng.random(22), 1)
        mine = wilcoxon_ranksum(a, b)
        ref = scipy.stats.mannwhitneyu(a, b, alternative="two-sided",
                                       method="asymptotic",
                                       use_continuity=False).pvalue
        assert mine == pytest.approx(ref, rel=1e-9)

    def test_validation(self):
        with pytest.raises(ContractViolation):
            wilcoxon_ranksum([], [1.0])


class TestMedianLow:
    def test_odd(self):
        assert median_low([0.3, 0.1, 0.2]) == 0.2

    def test_even_takes_lower_middle(self):
        assert median_low([4.0, 1.0, 3.0, 2.0]) == 2.0

    def test_empty(self):
        with pytest.raises(ContractViolation):
            median_low([])
