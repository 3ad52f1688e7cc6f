"""The innovized repair (IR2) operator: slot-per-reference-point target
archive, sliding offspring archive, forest training on archive-to-target
pairs, offspring repair with enhancement / near-bound restoration /
inverse-parabolic boundary handling, and the progress-gated learning switch.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from ir2emo import forest as rf
from ir2emo.core import ContractViolation, Population, RandomSource
from ir2emo.refassoc import (
    ReferenceSet,
    ScalarizingMetric,
    apply_frame,
    associate,
    normalize,
    scalarize,
)


class TargetArchive:
    """Best-scalarizing solution found so far for each reference point.

    Slot i is the target for reference point Z^(i); empty slots simply do
    not contribute training pairs.
    """

    def __init__(self, N: int, n_var: int, M: int):
        self.X = np.zeros((N, n_var))
        self.F = np.zeros((N, M))
        self.filled = np.zeros(N, dtype=bool)

    def __len__(self) -> int:
        return self.X.shape[0]

    @property
    def n_filled(self) -> int:
        return int(self.filled.sum())

    def copy(self) -> "TargetArchive":
        t = TargetArchive.__new__(TargetArchive)
        t.X = self.X.copy()
        t.F = self.F.copy()
        t.filled = self.filled.copy()
        return t


class SlidingArchive:
    """Training input pool: offspring from the last t_past generations plus
    the single lagged parent population."""

    def __init__(self, t_past: int, initial_parent: Population):
        self.t_past = int(t_past)
        self.offspring: deque[Population] = deque()
        self.parents: deque[Population] = deque([initial_parent])

    @property
    def size(self) -> int:
        return sum(len(q) for q in self.offspring) + len(self.parents[0])

    def members(self) -> Population:
        return Population.concat(list(self.offspring) + [self.parents[0]])

    def lagged_parent(self) -> Population:
        return self.parents[0]


def update_archive(archive: SlidingArchive, offspring: Population,
                   next_parent: Population) -> SlidingArchive:
    """Rotate the ring: add this generation's offspring and parent, drop
    buffers older than t_past generations."""
    archive.offspring.append(offspring)
    if len(archive.offspring) > archive.t_past:
        archive.offspring.popleft()
    archive.parents.append(next_parent)
    if len(archive.parents) > archive.t_past + 1:
        archive.parents.popleft()
    return archive


@dataclass(frozen=True)
class RepairModel:
    """Trained forest plus the dynamic normalization bounds it was fit in."""

    forest: rf.Forest
    xmin: np.ndarray
    xmax: np.ndarray

    def predict(self, X: np.ndarray) -> np.ndarray:
        return rf.predict(self.forest, X)


@dataclass
class LearningGate:
    """Progress monitor switching learning off (and back on) adaptively.

    history holds the running convergence metric; learning happens when the
    newest value exceeds g_th percent of the historical maximum and the
    generation index is a repair-cadence multiple.
    """

    g_th: float = 10.0
    t_freq: int = 5
    eta: float = 1.1
    history: list[float] = field(default_factory=list)


def update_target(P: Population, T_prev: TargetArchive, Z: ReferenceSet,
                  metric: ScalarizingMetric) -> TargetArchive:
    """Refresh the target archive from the current parent population.

    The normalization frame comes from the population's objectives only;
    stored targets are re-scored in that frame. Each member goes to its
    argmin reference slot: empty slots fill, occupied slots are replaced
    only by a strictly smaller scalarizer value.
    """
    if not P.evaluated:
        raise ContractViolation("update_target needs an evaluated population")
    if len(T_prev) != len(Z):
        raise ContractViolation("target archive size must equal |Z|")
    T = T_prev.copy()
    frame, FbarP = normalize(P.F)
    # current occupants' scalarizer values in today's frame
    slot_val = np.full(len(T), np.inf)
    if T.filled.any():
        FbarT = apply_frame(frame, T.F[T.filled])
        zs = Z.points[T.filled]
        vals = [scalarize(metric, FbarT[j], zs[j]) for j in range(len(zs))]
        slot_val[T.filled] = vals
    idx, val = associate(FbarP, Z, metric)
    for i in range(len(P)):
        j = int(idx[i])
        if not T.filled[j] or val[i] < slot_val[j]:
            T.X[j] = P.X[i]
            T.F[j] = P.F[i]
            T.filled[j] = True
            slot_val[j] = val[i]
    return T


def archive_mapping(archive: SlidingArchive, T: TargetArchive, Z: ReferenceSet,
                    metric: ScalarizingMetric) -> tuple[np.ndarray, np.ndarray] | None:
    """Pair each archive member with the target of its nearest reference.

    The archive is normalized by its own frame (independently of the
    targets). Members associated with an empty slot are skipped. Returns
    (inputs, outputs) in problem units, or None when no usable pair exists.
    """
    if T.n_filled == 0:
        return None
    pool = archive.members()
    _, FbarA = normalize(pool.F)
    idx, _ = associate(FbarA, Z, metric)
    usable = T.filled[idx]
    if not usable.any():
        return None
    rows = np.flatnonzero(usable)
    return pool.X[rows], T.X[idx[rows]]


def train_repair_model(inputs: np.ndarray, outputs: np.ndarray,
                       bounds: tuple[np.ndarray, np.ndarray],
                       rng: RandomSource,
                       params: rf.ForestParams | None = None) -> RepairModel:
    """Dynamic-normalization training wrapper.

    Blends the training data's per-variable extrema with the problem bounds
    (midpoint blend on each side), normalizes the dataset to those bounds,
    and fits a forest with one tree per training row.
    """
    if len(inputs) == 0:
        raise ContractViolation("cannot train a repair model without data")
    lower, upper = bounds
    both = np.vstack([inputs, outputs])
    x_lt = both.min(axis=0)
    x_ut = both.max(axis=0)
    xmin = 0.5 * (x_lt + lower)
    xmax = 0.5 * (x_ut + upper)
    span = np.maximum(xmax - xmin, 1e-12)
    data = rf.TrainingDataset((inputs - xmin) / span, (outputs - xmin) / span)
    if params is None:
        params = rf.ForestParams.for_dataset(data)
    model = rf.fit(data, params, rng)
    return RepairModel(forest=model, xmin=xmin, xmax=xmax)


def enhance(X: np.ndarray, Y: np.ndarray, eta: float) -> np.ndarray:
    """Extrapolate the repaired point beyond the prediction: X + eta*(Y - X).

    eta == 1 means no enhancement and returns Y exactly (not via the
    arithmetic, which would perturb the last bit).
    """
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    if X.shape != Y.shape:
        raise ContractViolation("enhance needs equal shapes")
    if eta == 1.0:
        return Y.copy()
    return X + eta * (Y - X)


def boundary_repair(value: float, low: float, high: float, original: float,
                    rng: RandomSource | np.random.Generator) -> float:
    """Map an out-of-bounds value to an interior point near the violated bound.

    Inverse-parabolic spread: with v the violation normalized by the box
    width and u ~ U(0,1), the repaired offset from the bound is
    min(v, 1)*u^2*(high-low), concentrating mass next to the bound. The
    pre-repair `original` is part of the operation's interface but does not
    influence the draw. In-bounds values pass through unchanged.
    """
    if not low < high:
        raise ContractViolation("boundary_repair needs low < high")
    if low <= value <= high:
        return float(value)
    gen = rng.stream("boundary") if isinstance(rng, RandomSource) else rng
    u = gen.random()
    if value < low:
        v = (low - value) / (high - low)
        return low + min(v, 1.0) * u * u * (high - low)
    v = (value - high) / (high - low)
    return high - min(v, 1.0) * u * u * (high - low)


def repair_vectors(X: np.ndarray, model: RepairModel, eta: float,
                   bounds: tuple[np.ndarray, np.ndarray],
                   gen: np.random.Generator) -> np.ndarray:
    """Repair a batch of decision vectors (rows of X).

    normalize -> predict -> denormalize -> enhance -> near-bound
    restoration (variables whose pre-repair value sits within 1% of the
    dynamic bounds keep their original value) -> boundary repair of any
    variable outside the problem bounds.
    """
    lower, upper = bounds
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    span = np.maximum(model.xmax - model.xmin, 1e-12)
    temp = (X - model.xmin) / span
    R = model.predict(temp)
    R = model.xmin + R * span
    R = enhance(X, R, eta)
    range_k = upper - lower
    vicinity = np.minimum(np.abs(X - model.xmin), np.abs(model.xmax - X))
    near = vicinity <= 0.01 * range_k
    R = np.where(near, X, R)
    viol = (R < lower) | (R > upper)
    for i, k in np.argwhere(viol):
        R[i, k] = boundary_repair(R[i, k], float(lower[k]), float(upper[k]),
                                  float(X[i, k]), gen)
    return R


def repair_offspring(Q: Population, model: RepairModel, eta: float,
                     bounds: tuple[np.ndarray, np.ndarray],
                     rng: RandomSource, fraction: float = 0.5) -> Population:
    """Repair a uniformly chosen fraction of the offspring population.

    Exactly floor(N*fraction) members are selected without replacement and
    replaced by their repaired versions; the rest pass through untouched.
    """
    gen = rng.stream("repair")
    N = len(Q)
    sel = gen.choice(N, size=int(N * fraction), replace=False)
    X = Q.X.copy()
    X[sel] = repair_vectors(Q.X[sel], model, eta, bounds, gen)
    return Population(X, None, Q.birth)


def g_metric(P_d: Population, P_t: Population) -> float:
    """Convergence movement of an earlier population toward the current one.

    (1/|P_d|) * sqrt(sum of squared nearest-neighbor distances in objective
    space).
    """
    if P_d.F is None or P_t.F is None or len(P_d) == 0 or len(P_t) == 0:
        raise ContractViolation("g_metric needs evaluated, non-empty populations")
    diff = P_d.F[:, None, :] - P_t.F[None, :, :]
    sq = np.sum(diff * diff, axis=2)
    nearest_sq = sq.min(axis=1)
    return float(np.sqrt(np.sum(nearest_sq)) / len(P_d))


def repair_gate(gate: LearningGate, G_t: float, t: int) -> bool:
    """Append G_t and decide whether to learn/repair this generation.

    True when G_t exceeds g_th percent of the history maximum (including
    G_t itself) and t is a multiple of the repair cadence; learning can
    resume later if the metric rises again.
    """
    gate.history.append(float(G_t))
    threshold = (gate.g_th / 100.0) * max(gate.history)
    return bool(G_t > threshold and t % gate.t_freq == 0)
