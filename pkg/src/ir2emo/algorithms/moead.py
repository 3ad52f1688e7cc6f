"""MOEA/D with PBI decomposition: neighborhood mating, one offspring per
subproblem, and capped neighborhood replacement."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ir2emo.algorithms.operators import (
    GeneticParams,
    polynomial_mutation,
    sbx_crossover,
)
from ir2emo.core import Population, ProblemDefinition
from ir2emo.refassoc import ReferenceSet


@dataclass(frozen=True)
class MoeadParams:
    """Neighborhood size, in-neighborhood mating probability, replacement
    cap, and PBI penalty."""

    N_S: int = 20
    delta: float = 0.9
    n_r: int = 2
    theta: float = 5.0


def pbi_value(f: np.ndarray, w: np.ndarray, z_ideal: np.ndarray,
              theta: float) -> float:
    d = f - z_ideal
    nrm = 0.0
    for k in range(w.shape[0]):
        nrm = nrm + w[k] * w[k]
    nrm = np.sqrt(nrm)
    zn = w / nrm
    d1 = 0.0
    for k in range(w.shape[0]):
        d1 = d1 + d[k] * zn[k]
    d2sq = 0.0
    for k in range(w.shape[0]):
        resid = d[k] - d1 * zn[k]
        d2sq = d2sq + resid * resid
    return float(d1 + theta * np.sqrt(d2sq))


class Moead:
    def __init__(self, problem: ProblemDefinition, N: int,
                 params: GeneticParams, Z: ReferenceSet, mparams: MoeadParams):
        self.problem = problem
        self.N = N
        self.params = params
        self.Z = Z
        self.mparams = mparams
        # N_S nearest reference points per subproblem (self included)
        D = np.linalg.norm(Z.points[:, None, :] - Z.points[None, :, :], axis=2)
        self.B = np.argsort(D, axis=1, kind="stable")[:, : mparams.N_S]
        self.z_ideal: np.ndarray | None = None

    def observe(self, F: np.ndarray) -> None:
        """Update the running ideal point."""
        low = F.min(axis=0) if F.ndim == 2 else F
        if self.z_ideal is None:
            self.z_ideal = low.copy()
        else:
            self.z_ideal = np.minimum(self.z_ideal, low)

    def generation(self, P: Population, gen: np.random.Generator,
                   birth: int, evaluate_one, repair_one=None,
                   repair_mask: np.ndarray | None = None,
                   ) -> tuple[Population, Population]:
        """One pass over all subproblems.

        Parents are read from the frozen snapshot P; replacements apply to
        the evolving next population. evaluate_one(x) -> f counts the
        evaluation; repair_one (when given) transforms offspring whose
        subproblem index is flagged in repair_mask. Returns (next parents,
        offspring created this generation).
        """
        mp = self.mparams
        Xnext = P.X.copy()
        Fnext = P.F.copy()
        Qx = np.empty_like(P.X)
        Qf = np.empty_like(P.F)
        for i in range(self.N):
            if gen.random() < mp.delta:
                pool = self.B[i]
            else:
                pool = np.arange(self.N)
            j, k = gen.choice(pool, size=2, replace=False)
            c1, _ = sbx_crossover(P.X[j], P.X[k], self.params,
                                  self.problem.lower, self.problem.upper, gen)
            child = polynomial_mutation(c1, self.params, self.problem.lower,
                                        self.problem.upper, gen)[0]
            if repair_one is not None and repair_mask is not None and repair_mask[i]:
                child = repair_one(child)
            f = evaluate_one(child)
            self.z_ideal = np.minimum(self.z_ideal, f)
            order = gen.permutation(self.B[i])
            replaced = 0
            for l in order:
                if pbi_value(f, self.Z.points[l], self.z_ideal, mp.theta) < \
                        pbi_value(Fnext[l], self.Z.points[l], self.z_ideal, mp.theta):
                    Xnext[l] = child
                    Fnext[l] = f
                    replaced += 1
                    if replaced >= mp.n_r:
                        break
            Qx[i] = child
            Qf[i] = f
        return (Population(Xnext, Fnext, birth),
                Population(Qx, Qf, birth))
