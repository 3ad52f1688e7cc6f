"""NSGA-III: random parent pairing, and reference-direction survival with
adaptive hyperplane normalization and niche-count niching."""

from __future__ import annotations

import numpy as np

from ir2emo import kernels
from ir2emo.algorithms.operators import (
    GeneticParams,
    polynomial_mutation,
    sbx_batch,
    shuffled_indices,
)
from ir2emo.core import Population, ProblemDefinition
from ir2emo.refassoc import ReferenceSet


def _hyperplane_intercepts(Ft: np.ndarray) -> np.ndarray:
    """Intercepts of the plane through the per-axis extreme points of the
    translated set Ft; falls back to the per-axis maximum when the system
    is singular or produces non-positive intercepts."""
    M = Ft.shape[1]
    weights = np.full((M, M), 1e-6)
    np.fill_diagonal(weights, 1.0)
    extremes = np.empty((M, M))
    for m in range(M):
        asf = np.max(Ft / weights[m], axis=1)
        extremes[m] = Ft[int(np.argmin(asf))]
    nadir = Ft.max(axis=0)
    try:
        b = np.linalg.solve(extremes, np.ones(M))
        intercepts = 1.0 / b
    except np.linalg.LinAlgError:
        return np.maximum(nadir, 1e-12)
    if not np.all(np.isfinite(intercepts)) or np.any(intercepts < 1e-6):
        return np.maximum(nadir, 1e-12)
    return intercepts


def survival(union: Population, Z: ReferenceSet, N: int,
             gen: np.random.Generator) -> Population:
    """Reference-point niching on the splitting front."""
    ranks = kernels.nd_ranks(union.F)
    keep: list[int] = []
    split: np.ndarray | None = None
    for r in range(int(ranks.max()) + 1):
        front = np.flatnonzero(ranks == r)
        if len(keep) + len(front) <= N:
            keep.extend(front.tolist())
            if len(keep) == N:
                return union.take(np.array(keep))
        else:
            split = front
            break
    considered = np.array(keep + split.tolist())
    Ft = union.F[considered] - union.F[considered].min(axis=0)
    intercepts = _hyperplane_intercepts(Ft)
    Fn = Ft / np.maximum(intercepts, 1e-12)
    ref_idx, dist = kernels.scalarize_argmin(Fn, Z.points, kernels.PDM, 0.0)

    n_keep = len(keep)
    niche = np.zeros(len(Z), dtype=np.int64)
    for i in range(n_keep):
        niche[ref_idx[i]] += 1
    # remaining candidates on the split front, grouped by reference
    cand: dict[int, list[int]] = {}
    for pos in range(n_keep, len(considered)):
        cand.setdefault(int(ref_idx[pos]), []).append(pos)

    chosen = list(keep)
    while len(chosen) < N:
        refs = np.array(sorted(cand.keys()))
        counts = niche[refs]
        min_refs = refs[counts == counts.min()]
        j = int(min_refs[gen.integers(len(min_refs))])
        members = cand[j]
        if niche[j] == 0:
            dists = [dist[pos] for pos in members]
            pick = members[int(np.argmin(dists))]
        else:
            pick = members[int(gen.integers(len(members)))]
        members.remove(pick)
        if not members:
            del cand[j]
        niche[j] += 1
        chosen.append(int(considered[pick]))
    return union.take(np.array(chosen))


class Nsga3:
    def __init__(self, problem: ProblemDefinition, N: int,
                 params: GeneticParams, Z: ReferenceSet):
        self.problem = problem
        self.N = N
        self.params = params
        self.Z = Z

    def mate(self, P: Population, gen: np.random.Generator,
             birth: int) -> Population:
        n_pairs = -(-self.N // 2)
        idx = shuffled_indices(len(P), 2 * n_pairs, gen)
        C1, C2 = sbx_batch(P.X[idx[0::2]], P.X[idx[1::2]], self.params,
                           self.problem.lower, self.problem.upper, gen)
        children = np.empty((2 * n_pairs, P.n_var))
        children[0::2] = C1
        children[1::2] = C2
        children = polynomial_mutation(children[: self.N], self.params,
                                       self.problem.lower, self.problem.upper,
                                       gen)
        return Population(children, None, birth)

    def survive(self, P: Population, Q: Population,
                gen: np.random.Generator) -> Population:
        return survival(Population.concat([P, Q]), self.Z, self.N, gen)
