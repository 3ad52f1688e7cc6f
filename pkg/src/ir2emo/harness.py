"""Experiment orchestration: multi-seed sweeps with resumable trace files,
and aggregation of base-vs-repair comparisons into report tables.

Each (problem, algorithm, seed) run writes one JSON-lines trace: a config
echo, one record per generation, and an end marker. A file with an end
marker is complete and will be skipped on re-runs; anything else is
recomputed from its seed (runs are deterministic, so the result is
bit-identical).
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from ir2emo.algorithms.moead import MoeadParams
from ir2emo.algorithms.operators import GeneticParams
from ir2emo.algorithms.runner import (
    Ir2Params,
    RunConfig,
    parse_algorithm_id,
    run,
)
from ir2emo.core import ConfigurationError
from ir2emo.metrics import median_low, recovery_savings, wilcoxon_ranksum

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ExperimentConfig:
    """A sweep: problems x algorithms x seeds with shared run settings."""

    problems: tuple[tuple[str, int], ...]
    algorithms: tuple[str, ...]
    seeds: tuple[int, ...]
    generations: int
    out_dir: str
    pop_size: int | None = None
    metrics: tuple[str, ...] = ("hv",)
    genetic: GeneticParams | None = None
    ir2: Ir2Params = field(default_factory=Ir2Params)
    moead: MoeadParams = field(default_factory=MoeadParams)

    def __post_init__(self):
        if len(self.seeds) == 0:
            raise ConfigurationError("seed list must be non-empty")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigurationError("seed list must be duplicate-free")
        for name in self.algorithms:
            parse_algorithm_id(name)

    @staticmethod
    def from_json(path: str) -> "ExperimentConfig":
        with open(path) as fh:
            doc = json.load(fh)
        problems = tuple(
            (p["name"], int(p.get("M", 2))) if isinstance(p, dict)
            else (p[0], int(p[1]))
            for p in doc["problems"])
        kwargs = {}
        if "genetic" in doc:
            kwargs["genetic"] = GeneticParams(**doc["genetic"])
        if "ir2" in doc:
            kwargs["ir2"] = Ir2Params(**doc["ir2"])
        if "moead" in doc:
            kwargs["moead"] = MoeadParams(**doc["moead"])
        return ExperimentConfig(
            problems=problems,
            algorithms=tuple(doc["algorithms"]),
            seeds=tuple(int(s) for s in doc["seeds"]),
            generations=int(doc["generations"]),
            out_dir=doc.get("out_dir", "runs"),
            pop_size=doc.get("pop_size"),
            metrics=tuple(doc.get("metrics", ["hv"])),
            **kwargs)

    def run_configs(self) -> list[RunConfig]:
        configs = []
        for name, M in self.problems:
            for algo_id in self.algorithms:
                algorithm, variant = parse_algorithm_id(algo_id)
                for seed in self.seeds:
                    configs.append(RunConfig(
                        problem=name, M=M, algorithm=algorithm,
                        variant=variant, seed=seed,
                        generations=self.generations,
                        pop_size=self.pop_size, genetic=self.genetic,
                        ir2=self.ir2, moead=self.moead,
                        metrics=self.metrics))
        return configs


def trace_path(out_dir: str, config: RunConfig) -> str:
    name = f"{config.problem}-M{config.M}-{config.algorithm_id}-s{config.seed}.jsonl"
    return os.path.join(out_dir, name)


def is_complete(path: str) -> bool:
    if not os.path.exists(path):
        return False
    with open(path, "rb") as fh:
        try:
            fh.seek(-256, os.SEEK_END)
        except OSError:
            fh.seek(0)
        tail = fh.read().decode("utf-8", errors="ignore")
    return '"type": "end"' in tail or '"type":"end"' in tail


def execute_run(config: RunConfig, out_dir: str) -> str:
    """Run one config and stream its trace to disk; returns the path."""
    path = trace_path(out_dir, config)
    os.makedirs(out_dir, exist_ok=True)
    tmp_path = path + ".part"
    with open(tmp_path, "w") as fh:
        header = {"type": "config", "schema": SCHEMA_VERSION}
        header.update(config.to_dict())
        fh.write(json.dumps(header) + "\n")
        fh.flush()

        def sink(rec):
            fh.write(json.dumps({"type": "gen", **rec}) + "\n")
            fh.flush()

        trace = run(config, on_record=sink)
        fh.write(json.dumps({"type": "end", "n_evals": trace.n_evals}) + "\n")
    os.replace(tmp_path, path)
    return path


def _worker(args) -> tuple[str, str | None]:
    config, out_dir = args
    try:
        return execute_run(config, out_dir), None
    except Exception as exc:  # sibling runs continue; error reported per trace
        return trace_path(out_dir, config), f"{type(exc).__name__}: {exc}"


def run_experiment(config: ExperimentConfig, workers: int = 1,
                   echo=None) -> dict:
    """Execute the sweep, skipping already-complete traces.

    Returns {"completed": [...], "skipped": [...], "failed": {path: error}}.
    """
    todo = []
    skipped = []
    for rc in config.run_configs():
        path = trace_path(config.out_dir, rc)
        if is_complete(path):
            skipped.append(path)
        else:
            todo.append((rc, config.out_dir))
    completed = []
    failed = {}
    if workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for path, err in pool.map(_worker, todo):
                _collect(path, err, completed, failed, echo)
    else:
        for args in todo:
            path, err = _worker(args)
            _collect(path, err, completed, failed, echo)
    return {"completed": completed, "skipped": skipped, "failed": failed}


def _collect(path, err, completed, failed, echo):
    if err is None:
        completed.append(path)
        if echo:
            echo(f"done {path}")
    else:
        failed[path] = err
        if echo:
            echo(f"FAILED {path}: {err}")


def load_trace(path: str) -> dict:
    """Read one trace file into {"config": ..., "records": [...], "complete": bool}."""
    config = None
    records = []
    complete = False
    with open(path) as fh:
        for line in fh:
            doc = json.loads(line)
            if doc["type"] == "config":
                config = doc
            elif doc["type"] == "gen":
                records.append(doc)
            elif doc["type"] == "end":
                complete = True
    return {"config": config, "records": records, "complete": complete}


@dataclass
class ResultTable:
    """Rows keyed by (problem, M): medians at the observation generation,
    rank-sum p-values, recovery generation, and percentage savings."""

    generation: int
    metric: str
    base_id: str
    ir2_id: str
    rows: list[dict] = field(default_factory=list)

    def to_csv(self, path: str) -> None:
        cols = ["problem", "M", "generation", f"median_{self.base_id}",
                f"median_{self.ir2_id}", "p_value", "p_one_sided",
                "recovery", "savings_pct"]
        with open(path, "w") as fh:
            fh.write(",".join(cols) + "\n")
            for r in self.rows:
                fh.write(",".join(str(r[c]) for c in cols) + "\n")

    def to_json(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump({"generation": self.generation, "metric": self.metric,
                       "base": self.base_id, "ir2": self.ir2_id,
                       "rows": self.rows}, fh, indent=1)


def aggregate_and_report(trace_dir: str, t: int, base_id: str, ir2_id: str,
                         metric: str = "hv") -> ResultTable:
    """Build a comparison table from stored traces.

    For each problem present for both algorithm ids: per-seed metric values
    at generation t, their medians (lower-middle convention), a two-sided
    and a one-sided rank-sum p-value, and the recovery generation at which
    the base median series first reaches the repair variant's median (with
    savings 100*(recovery - t)/t).
    """
    groups: dict[tuple, dict] = {}
    for fname in sorted(os.listdir(trace_dir)):
        if not fname.endswith(".jsonl"):
            continue
        tr = load_trace(os.path.join(trace_dir, fname))
        if not tr["complete"]:
            continue
        cfg = tr["config"]
        algo_id = cfg["algorithm"] if cfg["variant"] == "base" else \
            f"{cfg['algorithm']}-ir2"
        key = (cfg["problem"], cfg["M"])
        groups.setdefault(key, {}).setdefault(algo_id, {})[cfg["seed"]] = \
            tr["records"]

    table = ResultTable(generation=t, metric=metric, base_id=base_id,
                        ir2_id=ir2_id)
    for (problem, M), algos in sorted(groups.items()):
        if base_id not in algos or ir2_id not in algos:
            continue
        base_runs = algos[base_id]
        ir2_runs = algos[ir2_id]
        if set(base_runs) != set(ir2_runs):
            raise ConfigurationError(
                f"{problem}-M{M}: seed sets differ between {base_id} "
                f"({sorted(base_runs)}) and {ir2_id} ({sorted(ir2_runs)})")
        seeds = sorted(base_runs)

        def at(records, gen):
            if gen >= len(records):
                raise ConfigurationError(
                    f"{problem}-M{M}: trace shorter than generation {gen}")
            return records[gen][metric]

        base_vals = [at(base_runs[s], t) for s in seeds]
        ir2_vals = [at(ir2_runs[s], t) for s in seeds]
        n_gen = min(len(base_runs[s]) for s in seeds)
        base_median_series = np.array(
            [median_low([at(base_runs[s], g) for s in seeds])
             for g in range(n_gen)])
        med_ir2 = median_low(ir2_vals)
        rec = recovery_savings(base_median_series, med_ir2, t)
        table.rows.append({
            "problem": problem, "M": M, "generation": t,
            f"median_{base_id}": median_low(base_vals),
            f"median_{ir2_id}": med_ir2,
            "p_value": wilcoxon_ranksum(ir2_vals, base_vals),
            "p_one_sided": wilcoxon_ranksum(ir2_vals, base_vals, "greater"),
            "recovery": rec.recovery,
            "savings_pct": rec.formatted(),
        })
    return table


def single_run_config(problem: str, M: int, algorithm_id: str, seed: int,
                      generations: int, **kwargs) -> RunConfig:
    algorithm, variant = parse_algorithm_id(algorithm_id)
    cfg = RunConfig(problem=problem, M=M, algorithm=algorithm, variant=variant,
                    seed=seed, generations=generations)
    return replace(cfg, **kwargs) if kwargs else cfg
