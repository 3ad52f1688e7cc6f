"""Core data types shared by every module: populations, problems, dominance,
and the deterministic random-source contract.

All objective values follow the minimization convention. Populations are
stored as row-major numpy arrays (one row per member), which is what the
operators and kernels work on directly.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Callable

import numpy as np


class ContractViolation(ValueError):
    """An operation was called with arguments breaking its preconditions."""


class ConfigurationError(ValueError):
    """Invalid problem/algorithm/experiment configuration."""


class EvaluationError(RuntimeError):
    """A problem evaluation produced a non-finite objective value."""


class UnsupportedError(ValueError):
    """Requested capability is outside the supported range."""


@dataclass(frozen=True)
class Individual:
    """One population member: decision vector, objective vector (or None
    before evaluation), and the generation it was created in."""

    x: np.ndarray
    f: np.ndarray | None = None
    birth_generation: int = 0


class Population:
    """Ordered set of members sharing n_var and M.

    X is (N, n_var) float64; F is (N, M) float64 or None when the members
    have not been evaluated yet. Arrays are frozen after construction so
    populations can be shared safely.
    """

    __slots__ = ("X", "F", "birth")

    def __init__(self, X: np.ndarray, F: np.ndarray | None = None,
                 birth: np.ndarray | int = 0):
        X = np.ascontiguousarray(np.atleast_2d(np.asarray(X, dtype=np.float64)))
        X.setflags(write=False)
        self.X = X
        if F is not None:
            F = np.ascontiguousarray(np.atleast_2d(np.asarray(F, dtype=np.float64)))
            if F.shape[0] != X.shape[0]:
                raise ContractViolation(
                    f"F has {F.shape[0]} rows but X has {X.shape[0]}")
            F.setflags(write=False)
        self.F = F
        if np.isscalar(birth):
            birth = np.full(X.shape[0], int(birth), dtype=np.int64)
        else:
            birth = np.asarray(birth, dtype=np.int64).copy()
        birth.setflags(write=False)
        self.birth = birth

    def __len__(self) -> int:
        return self.X.shape[0]

    @property
    def n_var(self) -> int:
        return self.X.shape[1]

    @property
    def evaluated(self) -> bool:
        return self.F is not None

    def member(self, i: int) -> Individual:
        f = None if self.F is None else self.F[i].copy()
        return Individual(self.X[i].copy(), f, int(self.birth[i]))

    def take(self, idx) -> "Population":
        idx = np.asarray(idx)
        F = None if self.F is None else self.F[idx]
        return Population(self.X[idx], F, self.birth[idx])

    @staticmethod
    def concat(pops: list["Population"]) -> "Population":
        X = np.vstack([p.X for p in pops])
        F = None
        if all(p.F is not None for p in pops):
            F = np.vstack([p.F for p in pops])
        birth = np.concatenate([p.birth for p in pops])
        return Population(X, F, birth)


@dataclass(frozen=True)
class ProblemDefinition:
    """A box-constrained minimization problem.

    evaluate_batch maps an (n, n_var) matrix to an (n, M) objective matrix
    and must be pure (deterministic, no side effects). evaluate is the
    single-vector convenience form.
    """

    name: str
    n_var: int
    M: int
    lower: np.ndarray
    upper: np.ndarray
    evaluate_batch: Callable[[np.ndarray], np.ndarray]
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=np.float64)
        hi = np.asarray(self.upper, dtype=np.float64)
        if lo.shape != (self.n_var,) or hi.shape != (self.n_var,):
            raise ConfigurationError(
                f"{self.name}: bounds must have shape ({self.n_var},)")
        if not np.all(lo < hi):
            raise ConfigurationError(f"{self.name}: lower bound must be < upper")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        return self.evaluate_batch(np.asarray(x, dtype=np.float64)[None, :])[0]


def _stream_key(name: str) -> int:
    # Stable across platforms and sessions (unlike hash()).
    digest = hashlib.sha256(name.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


class RandomSource:
    """Seeded factory of independent named random streams.

    Streams are numpy Generator(PCG64) instances derived from the root seed
    via SeedSequence spawn keys hashed from the stream name, so adding a new
    consumer never perturbs existing streams and identical seeds reproduce
    identical draw sequences on every platform. The generator family is
    fixed; changing it would silently break recorded experiments.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._streams: dict[str, np.random.Generator] = {}

    def stream(self, name: str) -> np.random.Generator:
        """Return the stateful stream for `name` (created on first use)."""
        gen = self._streams.get(name)
        if gen is None:
            seq = np.random.SeedSequence(self.seed, spawn_key=(_stream_key(name),))
            gen = np.random.Generator(np.random.PCG64(seq))
            self._streams[name] = gen
        return gen

    def derive_seeds(self, name: str, count: int) -> np.ndarray:
        """Draw `count` 63-bit child seeds from the named stream.

        Used to seed per-unit generators (e.g. one per forest tree) so units
        can run in parallel without changing results.
        """
        return self.stream(name).integers(0, 2**63 - 1, size=count, dtype=np.int64)


class EvalCounter:
    """Run-scoped count of objective-function evaluations."""

    __slots__ = ("count",)

    def __init__(self):
        self.count = 0


def dominates(a: np.ndarray, b: np.ndarray) -> bool:
    """Pareto dominance: a is no worse everywhere and strictly better somewhere."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ContractViolation(f"length mismatch: {a.shape} vs {b.shape}")
    return bool(np.all(a <= b) and np.any(a < b))


def evaluate_all(problem: ProblemDefinition, pop: Population,
                 counter: EvalCounter | None = None) -> Population:
    """Evaluate every member of `pop` on `problem`.

    Returns a new population with F set. The counter (when given) is
    incremented by exactly len(pop). Non-finite objectives raise
    EvaluationError naming the offending member.
    """
    if len(pop) == 0:
        return Population(pop.X.reshape(0, problem.n_var),
                          np.zeros((0, problem.M)), pop.birth)
    F = np.asarray(problem.evaluate_batch(pop.X), dtype=np.float64)
    if F.shape != (len(pop), problem.M):
        raise EvaluationError(
            f"{problem.name}: evaluate_batch returned shape {F.shape}, "
            f"expected {(len(pop), problem.M)}")
    bad = ~np.all(np.isfinite(F), axis=1)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise EvaluationError(
            f"{problem.name}: non-finite objective for member {i}: {F[i]}")
    if counter is not None:
        counter.count += len(pop)
    return Population(pop.X, F, pop.birth)
