"""NSGA-II: binary-tournament mating on (rank, crowding) and
crowded-elitist survival."""

from __future__ import annotations

import numpy as np

from ir2emo import kernels
from ir2emo.algorithms.operators import (
    GeneticParams,
    crowding_distance,
    polynomial_mutation,
    sbx_batch,
    shuffled_indices,
)
from ir2emo.core import Population, ProblemDefinition


def ranks_and_crowding(F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ranks = kernels.nd_ranks(F)
    crowd = np.zeros(len(F))
    for r in range(int(ranks.max()) + 1):
        idx = np.flatnonzero(ranks == r)
        crowd[idx] = crowding_distance(F[idx])
    return ranks, crowd


def survival(union: Population, N: int) -> Population:
    """Nondominated sorting; the split front is truncated by crowding
    distance (boundary members first, ties by index)."""
    ranks = kernels.nd_ranks(union.F)
    chosen: list[np.ndarray] = []
    total = 0
    for r in range(int(ranks.max()) + 1):
        front = np.flatnonzero(ranks == r)
        if total + len(front) <= N:
            chosen.append(front)
            total += len(front)
            if total == N:
                break
        else:
            crowd = crowding_distance(union.F[front])
            order = np.argsort(-crowd, kind="stable")
            chosen.append(front[order[: N - total]])
            break
    return union.take(np.concatenate(chosen))


class Nsga2:
    def __init__(self, problem: ProblemDefinition, N: int, params: GeneticParams):
        self.problem = problem
        self.N = N
        self.params = params

    def mate(self, P: Population, gen: np.random.Generator,
             birth: int) -> Population:
        """Binary tournaments on (rank asc, crowding desc), ties by index;
        winners pair up for SBX + polynomial mutation."""
        ranks, crowd = ranks_and_crowding(P.F)
        n_pairs = -(-self.N // 2)
        cand = shuffled_indices(len(P), 4 * n_pairs, gen).reshape(-1, 2)
        winners = np.empty(2 * n_pairs, dtype=np.int64)
        for i, (a, b) in enumerate(cand):
            if ranks[a] != ranks[b]:
                winners[i] = a if ranks[a] < ranks[b] else b
            elif crowd[a] != crowd[b]:
                winners[i] = a if crowd[a] > crowd[b] else b
            else:
                winners[i] = min(a, b)
        P1 = P.X[winners[0::2]]
        P2 = P.X[winners[1::2]]
        C1, C2 = sbx_batch(P1, P2, self.params, self.problem.lower,
                           self.problem.upper, gen)
        children = np.empty((2 * n_pairs, P.n_var))
        children[0::2] = C1
        children[1::2] = C2
        children = polynomial_mutation(children[: self.N], self.params,
                                       self.problem.lower, self.problem.upper,
                                       gen)
        return Population(children, None, birth)

    def survive(self, P: Population, Q: Population,
                gen: np.random.Generator) -> Population:
        return survival(Population.concat([P, Q]), self.N)
