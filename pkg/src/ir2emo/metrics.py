"""Performance indicators and experiment statistics: exact hypervolume
(M <= 5) with the reporting protocol, GD/IGD, recovery-generation savings,
and the Wilcoxon rank-sum test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ir2emo import kernels
from ir2emo.core import ContractViolation, UnsupportedError


def hypervolume(front: np.ndarray, ref: np.ndarray) -> float:
    """Exact dominated hypervolume of `front` bounded by `ref` (minimization).

    Points that do not dominate the reference are discarded, as are
    dominated points (they contribute nothing). Supports M <= 5.
    """
    ref = np.asarray(ref, dtype=np.float64)
    M = ref.shape[0]
    if M > 5:
        raise UnsupportedError("exact hypervolume supports M <= 5")
    F = np.atleast_2d(np.asarray(front, dtype=np.float64))
    if F.shape[0] == 0:
        return 0.0
    if F.shape[1] != M:
        raise ContractViolation(f"front is {F.shape[1]}-d but ref is {M}-d")
    F = F[np.all(F < ref, axis=1)]
    if F.shape[0] == 0:
        return 0.0
    F = F[kernels.nd_ranks(F) == 0]
    return kernels.hv_exact(np.ascontiguousarray(F), ref)


def hv_reference(N: int, M: int) -> np.ndarray:
    """Reporting reference point [N/(N-1)] in every objective."""
    if N < 2:
        raise ContractViolation("hv_reference needs N >= 2")
    return np.full(M, N / (N - 1))


@dataclass(frozen=True)
class HvProtocol:
    """Reporting rule: fixed reference point, plus per-objective
    normalization by [0, 2i] for the WFG suite."""

    reference: np.ndarray
    wfg_normalize: bool = False

    @staticmethod
    def for_run(N: int, M: int, suite: str | None) -> "HvProtocol":
        return HvProtocol(hv_reference(N, M), wfg_normalize=(suite == "WFG"))

    def value(self, F: np.ndarray) -> float:
        F = np.atleast_2d(np.asarray(F, dtype=np.float64))
        if self.wfg_normalize:
            F = F / (2.0 * np.arange(1, F.shape[1] + 1))
        return hypervolume(F, self.reference)


def _mean_root_sq_nearest(A: np.ndarray, B: np.ndarray) -> float:
    diff = A[:, None, :] - B[None, :, :]
    sq = np.sum(diff * diff, axis=2)
    return float(np.sqrt(np.sum(sq.min(axis=1))) / A.shape[0])


def gd_igd(front: np.ndarray, reference_front: np.ndarray, mode: str) -> float:
    """Generational distance (or inverted, mode="IGD") between a front and
    a reference front sample."""
    F = np.atleast_2d(np.asarray(front, dtype=np.float64))
    R = np.atleast_2d(np.asarray(reference_front, dtype=np.float64))
    if F.shape[0] == 0 or R.shape[0] == 0:
        raise ContractViolation("gd_igd needs non-empty sets")
    if mode == "GD":
        return _mean_root_sq_nearest(F, R)
    if mode == "IGD":
        return _mean_root_sq_nearest(R, F)
    raise ContractViolation(f"mode must be GD or IGD, got {mode!r}")


@dataclass(frozen=True)
class RecoveryResult:
    """First-crossing recovery of a baseline series to a target value."""

    recovery: float      # generation index; inf when never reached
    delta_t: float
    savings_pct: float   # lower bound when censored
    censored: bool

    def formatted(self) -> str:
        if self.censored:
            return f"> {self.savings_pct:.1f}"
        return f"{self.savings_pct:.1f}"


def recovery_savings(base_series: np.ndarray, repaired_value: float,
                     t: int) -> RecoveryResult:
    """Generation at which the baseline reaches `repaired_value`, and the
    corresponding evaluation savings 100*(recovery - t)/t.

    base_series[g] is the baseline metric at generation g. Negative savings
    mean the baseline got there earlier. A series that never reaches the
    value yields recovery=inf with the savings reported as a censored lower
    bound from the last recorded generation.
    """
    if t <= 0:
        raise ContractViolation("recovery_savings needs t >= 1")
    series = np.asarray(base_series, dtype=np.float64)
    reached = np.flatnonzero(series >= repaired_value)
    if reached.size == 0:
        g_max = len(series) - 1
        return RecoveryResult(math.inf, math.inf,
                              100.0 * (g_max - t) / t, True)
    g = int(reached[0])
    return RecoveryResult(float(g), float(g - t), 100.0 * (g - t) / t, False)


def _midranks(pooled: np.ndarray) -> np.ndarray:
    order = np.argsort(pooled, kind="stable")
    ranks = np.empty(len(pooled))
    i = 0
    while i < len(pooled):
        j = i
        while j + 1 < len(pooled) and pooled[order[j + 1]] == pooled[order[i]]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def wilcoxon_ranksum(a, b, alternative: str = "two-sided") -> float:
    """Rank-sum test p-value.

    Exact enumeration of all rank assignments when the pooled size is at
    most 16; otherwise the normal approximation with tie correction.
    alternative "greater" tests whether a tends larger than b.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.size == 0 or b.size == 0:
        raise ContractViolation("wilcoxon_ranksum needs non-empty samples")
    na, nb = a.size, b.size
    n = na + nb
    ranks = _midranks(np.concatenate([a, b]))
    W = float(ranks[:na].sum())
    mu = na * (n + 1) / 2.0

    if n <= 16:
        total = 0
        hits = 0
        obs = abs(W - mu)
        for comb in combinations(range(n), na):
            w = float(ranks[list(comb)].sum())
            total += 1
            if alternative == "two-sided":
                hits += abs(w - mu) >= obs - 1e-12
            elif alternative == "greater":
                hits += w >= W - 1e-12
            else:
                hits += w <= W + 1e-12
        return hits / total

    ties = np.unique(ranks, return_counts=True)[1]
    tie_term = float(np.sum(ties ** 3 - ties)) / (n * (n - 1))
    sigma_sq = na * nb / 12.0 * ((n + 1) - tie_term)
    if sigma_sq <= 0:
        return 1.0
    z = (W - mu) / math.sqrt(sigma_sq)
    if alternative == "two-sided":
        return math.erfc(abs(z) / math.sqrt(2.0))
    if alternative == "greater":
        return 0.5 * math.erfc(z / math.sqrt(2.0))
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def median_low(values) -> float:
    """Lower-middle element for even counts, so the median is always a value
    realized by an actual run."""
    arr = np.sort(np.asarray(values, dtype=np.float64))
    if arr.size == 0:
        raise ContractViolation("median of empty sample")
    return float(arr[(arr.size - 1) // 2])
