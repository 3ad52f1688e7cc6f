"""Run orchestration: configuration, the per-generation loops of the base
algorithms, and their IR2-augmented counterparts.

The IR2 variant of a generation is: update targets -> gate decision ->
(archive mapping + forest training) when learning -> mating -> repair of
half the offspring when learning -> evaluation -> sliding-archive rotation
-> survival. With the gate off it consumes exactly the same random streams
as the base algorithm, so both trajectories are bit-identical.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from math import comb

import numpy as np

from ir2emo import metrics as perf
from ir2emo import repair as ir2
from ir2emo.algorithms.moead import Moead, MoeadParams
from ir2emo.algorithms.nsga2 import Nsga2
from ir2emo.algorithms.nsga3 import Nsga3
from ir2emo.algorithms.operators import GeneticParams
from ir2emo.core import (
    ConfigurationError,
    EvalCounter,
    EvaluationError,
    Population,
    RandomSource,
    evaluate_all,
)
from ir2emo.problems import make_problem, pareto_front_sample
from ir2emo.refassoc import ScalarizingMetric, das_dennis

# population size N and Das-Dennis gaps p per objective count
TABLE_N_P = {2: (100, 99), 3: (105, 13), 4: (286, 10), 5: (495, 8)}

DEFAULT_METRIC_BY_ALGO = {"nsga2": "ASF", "nsga3": "PDM", "moead": "PBI"}


@dataclass(frozen=True)
class Ir2Params:
    """Operator knobs: archive depth, repair cadence, enhancement factor,
    gate threshold (percent), repair fraction, association metric override,
    and a switch that forces the gate off (for regression comparisons)."""

    t_past: int = 5
    t_freq: int = 5
    eta: float = 1.1
    g_th: float = 10.0
    repair_fraction: float = 0.5
    association_metric: str | None = None
    force_gate_off: bool = False


@dataclass(frozen=True)
class RunConfig:
    problem: str
    M: int = 2
    algorithm: str = "nsga2"   # nsga2 | nsga3 | moead
    variant: str = "base"      # base | ir2
    seed: int = 1
    generations: int = 100
    pop_size: int | None = None
    genetic: GeneticParams | None = None
    ir2: Ir2Params = field(default_factory=Ir2Params)
    moead: MoeadParams = field(default_factory=MoeadParams)
    metrics: tuple[str, ...] = ("hv",)
    keep_populations: bool = False

    @property
    def algorithm_id(self) -> str:
        return self.algorithm if self.variant == "base" else \
            f"{self.algorithm}-ir2"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["metrics"] = list(self.metrics)
        return d


def parse_algorithm_id(name: str) -> tuple[str, str]:
    """Split an id like "nsga3-ir2" into (algorithm, variant)."""
    base = name.lower()
    variant = "base"
    if base.endswith("-ir2"):
        base, variant = base[:-4], "ir2"
    if base not in ("nsga2", "nsga3", "moead"):
        raise ConfigurationError(f"unknown algorithm {name!r}")
    return base, variant


def gaps_for(M: int, N: int) -> int:
    """Das-Dennis gap count p with exactly N points, or raise."""
    for p in range(1, 3000):
        c = comb(p + M - 1, M - 1)
        if c == N:
            return p
        if c > N:
            break
    raise ConfigurationError(
        f"no Das-Dennis lattice with {N} points for M={M}; "
        f"pick N from the lattice sizes")


@dataclass
class RunTrace:
    """Per-generation metric records plus the final population."""

    config: dict
    records: list[dict] = field(default_factory=list)
    populations: list[Population] | None = None
    final: Population | None = None
    n_evals: int = 0

    def series(self, key: str) -> np.ndarray:
        return np.array([r[key] for r in self.records], dtype=np.float64)


class _Ir2State:
    def __init__(self, N: int, n_var: int, M: int, Z, metric, params: Ir2Params,
                 initial_parent: Population):
        self.Z = Z
        self.metric = metric
        self.params = params
        self.targets = ir2.TargetArchive(N, n_var, M)
        self.archive = ir2.SlidingArchive(params.t_past, initial_parent)
        self.gate = ir2.LearningGate(g_th=params.g_th, t_freq=params.t_freq,
                                     eta=params.eta)

    def pre_generation(self, P: Population, t: int, bounds, rng: RandomSource):
        """Alg.-style lines 1..10: targets, gate, optional training."""
        self.targets = ir2.update_target(P, self.targets, self.Z, self.metric)
        g_t = ir2.g_metric(self.archive.lagged_parent(), P)
        flag = ir2.repair_gate(self.gate, g_t, t)
        if self.params.force_gate_off:
            flag = False
        model = None
        if flag:
            pairs = ir2.archive_mapping(self.archive, self.targets, self.Z,
                                        self.metric)
            if pairs is None:
                flag = False
            else:
                model = ir2.train_repair_model(pairs[0], pairs[1], bounds, rng)
        return flag, model


def _resolve(config: RunConfig):
    problem = make_problem(config.problem, config.M)
    if config.pop_size is not None:
        N = int(config.pop_size)
    else:
        if config.M not in TABLE_N_P:
            raise ConfigurationError(f"no default population size for M={config.M}")
        N = TABLE_N_P[config.M][0]
    genetic = config.genetic or GeneticParams()
    needs_refs = config.algorithm in ("nsga3", "moead") or config.variant == "ir2"
    Z = das_dennis(config.M, gaps_for(config.M, N)) if needs_refs else None
    metric_kind = config.ir2.association_metric or \
        DEFAULT_METRIC_BY_ALGO[config.algorithm]
    metric = ScalarizingMetric(metric_kind, theta=config.moead.theta)
    return problem, N, genetic, Z, metric


def run(config: RunConfig, on_record=None) -> RunTrace:
    """Execute one seeded run and record per-generation metrics.

    Total evaluations are N*(generations+1): the initial population plus
    exactly N offspring per generation. on_record (when given) receives each
    per-generation record dict as soon as it exists, so callers can stream
    traces to disk.
    """
    problem, N, genetic, Z, metric = _resolve(config)
    if config.variant not in ("base", "ir2"):
        raise ConfigurationError(f"unknown variant {config.variant!r}")
    bounds = (problem.lower, problem.upper)
    suite = problem.params.get("suite") if problem.params else None
    protocol = perf.HvProtocol.for_run(N, config.M, suite)
    front = None
    if any(m in config.metrics for m in ("gd", "igd")):
        front = pareto_front_sample(problem, 500).points

    rng = RandomSource(config.seed)
    counter = EvalCounter()
    X0 = rng.stream("init").uniform(problem.lower, problem.upper,
                                    (N, problem.n_var))
    P = evaluate_all(problem, Population(X0, birth=0), counter)

    if config.algorithm == "nsga2":
        algo = Nsga2(problem, N, genetic)
    elif config.algorithm == "nsga3":
        algo = Nsga3(problem, N, genetic, Z)
    else:
        algo = Moead(problem, N, genetic, Z, config.moead)
        algo.observe(P.F)

    state = _Ir2State(N, problem.n_var, config.M, Z, metric, config.ir2, P) \
        if config.variant == "ir2" else None

    trace = RunTrace(config=config.to_dict(),
                     populations=[P] if config.keep_populations else None)
    _record(trace, 0, P, counter, protocol, front, config.metrics, on_record)

    for t in range(1, config.generations + 1):
        if config.algorithm == "moead":
            P_next, Q = _moead_generation(config, problem, algo, state, P, t,
                                          counter, rng, bounds)
        else:
            P_next, Q = _nsga_generation(config, problem, algo, state, P, t,
                                         counter, rng, bounds)
        if state is not None:
            ir2.update_archive(state.archive, Q, P_next)
        P = P_next
        if trace.populations is not None:
            trace.populations.append(P)
        _record(trace, t, P, counter, protocol, front, config.metrics, on_record)

    trace.final = P
    trace.n_evals = counter.count
    return trace


def _nsga_generation(config, problem, algo, state, P, t, counter, rng, bounds):
    flag, model = (False, None) if state is None else \
        state.pre_generation(P, t, bounds, rng)
    Q = algo.mate(P, rng.stream("mating"), birth=t)
    if flag:
        Q = ir2.repair_offspring(Q, model, state.params.eta, bounds, rng,
                                 fraction=state.params.repair_fraction)
    Q = evaluate_all(problem, Q, counter)
    P_next = algo.survive(P, Q, rng.stream("survival"))
    return P_next, Q


def _moead_generation(config, problem, algo, state, P, t, counter, rng, bounds):
    flag, model = (False, None) if state is None else \
        state.pre_generation(P, t, bounds, rng)
    repair_mask = None
    repair_one = None
    if state is not None:
        gen_r = rng.stream("repair")
        sel = gen_r.choice(N := len(P), size=int(N * state.params.repair_fraction),
                           replace=False)
        repair_mask = np.zeros(len(P), dtype=bool)
        repair_mask[sel] = True
        if flag:
            repair_one = lambda x: ir2.repair_vectors(  # noqa: E731
                x, model, state.params.eta, bounds, gen_r)[0]
        else:
            repair_mask = None

    def evaluate_one(x: np.ndarray) -> np.ndarray:
        f = problem.evaluate_batch(x[None, :])[0]
        if not np.all(np.isfinite(f)):
            raise EvaluationError(f"{problem.name}: non-finite objective {f}")
        counter.count += 1
        return f

    return algo.generation(P, rng.stream("moead"), birth=t,
                           evaluate_one=evaluate_one, repair_one=repair_one,
                           repair_mask=repair_mask)


def _record(trace, t, P, counter, protocol, front, wanted, on_record=None):
    rec = {"t": t, "n_evals": counter.count}
    nd = P.F[np.asarray(_nd_mask(P.F))]
    if "hv" in wanted:
        rec["hv"] = protocol.value(nd)
    if front is not None:
        if "gd" in wanted:
            rec["gd"] = perf.gd_igd(nd, front, "GD")
        if "igd" in wanted:
            rec["igd"] = perf.gd_igd(nd, front, "IGD")
    trace.records.append(rec)
    if on_record is not None:
        on_record(rec)


def _nd_mask(F: np.ndarray):
    from ir2emo import kernels

    return kernels.nd_ranks(F) == 0
