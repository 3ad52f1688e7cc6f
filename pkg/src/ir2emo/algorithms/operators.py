"""Real-coded genetic operators: simulated binary crossover and polynomial
mutation, vectorized over populations.

SBX uses the symmetric (mean-preserving) child formulas with post-hoc bound
clipping. Draw counts are fixed-shape per call (arrays are drawn for every
pair/variable whether or not the corresponding gate fires), which keeps the
random stream layout stable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GeneticParams:
    """Crossover/mutation settings: probabilities and distribution indices."""

    p_c: float = 0.9
    eta_c: float = 10.0
    p_m: float = 0.1
    eta_m: float = 20.0

    def __post_init__(self):
        if not (0.0 <= self.p_c <= 1.0 and 0.0 <= self.p_m <= 1.0):
            raise ValueError("probabilities must lie in [0, 1]")
        if self.eta_c <= 0 or self.eta_m <= 0:
            raise ValueError("distribution indices must be positive")


def sbx_batch(P1: np.ndarray, P2: np.ndarray, params: GeneticParams,
              lower: np.ndarray, upper: np.ndarray,
              gen: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """SBX on (n_pairs, n_var) parent matrices; returns both child matrices."""
    P1 = np.atleast_2d(P1)
    P2 = np.atleast_2d(P2)
    n_pairs, n_var = P1.shape
    do_pair = gen.random(n_pairs) <= params.p_c
    var_gate = gen.random((n_pairs, n_var)) <= 0.5
    u = gen.random((n_pairs, n_var))
    swap = gen.random((n_pairs, n_var)) <= 0.5
    cross = do_pair[:, None] & var_gate & (np.abs(P1 - P2) > 1e-14)

    exp = 1.0 / (params.eta_c + 1.0)
    beta = np.where(u <= 0.5, (2.0 * u) ** exp,
                    (1.0 / (2.0 * (1.0 - u))) ** exp)
    c1 = 0.5 * ((1.0 + beta) * P1 + (1.0 - beta) * P2)
    c2 = 0.5 * ((1.0 - beta) * P1 + (1.0 + beta) * P2)
    # per-variable child swap, as in the reference NSGA-II implementation;
    # without it coordinate mixing (and convergence) collapses
    c1s = np.where(swap, c2, c1)
    c2s = np.where(swap, c1, c2)
    c1 = np.where(cross, c1s, P1)
    c2 = np.where(cross, c2s, P2)
    return (np.clip(c1, lower, upper), np.clip(c2, lower, upper))


def sbx_crossover(p1: np.ndarray, p2: np.ndarray, params: GeneticParams,
                  lower: np.ndarray, upper: np.ndarray,
                  gen: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """SBX on one parent pair."""
    C1, C2 = sbx_batch(p1[None, :], p2[None, :], params, lower, upper, gen)
    return C1[0], C2[0]


def polynomial_mutation(X: np.ndarray, params: GeneticParams,
                        lower: np.ndarray, upper: np.ndarray,
                        gen: np.random.Generator) -> np.ndarray:
    """Bounded polynomial mutation, per variable with probability p_m."""
    X = np.atleast_2d(X)
    span = upper - lower
    gate = gen.random(X.shape) <= params.p_m
    u = gen.random(X.shape)
    d1 = (X - lower) / span
    d2 = (upper - X) / span
    mut_pow = 1.0 / (params.eta_m + 1.0)
    lo_branch = (2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1) ** (params.eta_m + 1.0)) \
        ** mut_pow - 1.0
    hi_branch = 1.0 - (2.0 * (1.0 - u) + 2.0 * (u - 0.5)
                       * (1.0 - d2) ** (params.eta_m + 1.0)) ** mut_pow
    delta = np.where(u <= 0.5, lo_branch, hi_branch)
    Xm = np.where(gate, X + delta * span, X)
    return np.clip(Xm, lower, upper)


def crowding_distance(F: np.ndarray) -> np.ndarray:
    """NSGA-II crowding distance within one front; extremes get +inf."""
    n, M = F.shape
    d = np.zeros(n)
    if n <= 2:
        return np.full(n, np.inf)
    for m in range(M):
        o = np.argsort(F[:, m], kind="stable")
        d[o[0]] = np.inf
        d[o[-1]] = np.inf
        span = F[o[-1], m] - F[o[0], m]
        if span > 0:
            d[o[1:-1]] += (F[o[2:], m] - F[o[:-2], m]) / span
    return d


def shuffled_indices(N: int, needed: int, gen: np.random.Generator) -> np.ndarray:
    """Concatenated random permutations of range(N), truncated to `needed`."""
    reps = -(-needed // N)
    return np.concatenate([gen.permutation(N) for _ in range(reps)])[:needed]
