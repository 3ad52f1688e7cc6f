"""Command-line interface.

Subcommands: run (single run), experiment (multi-seed sweep from a JSON
config), report (aggregate traces into a table), metrics (standalone
indicators on front files), refpoints (reference-point generation), and
problems (registry listing). Front files are plain text, one objective
vector per line, whitespace-separated.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from ir2emo import harness, metrics
from ir2emo.algorithms.runner import Ir2Params, RunConfig, parse_algorithm_id
from ir2emo.problems import list_problems, make_problem, pareto_front_sample
from ir2emo.refassoc import das_dennis, layered_points


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--problem", required=True)
    p.add_argument("--objectives", "-M", type=int, default=2)
    p.add_argument("--algorithm", default="nsga2",
                   help="nsga2|nsga3|moead, with optional -ir2 suffix")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--generations", type=int, default=100)
    p.add_argument("--pop-size", type=int, default=None)
    p.add_argument("--eta", type=float, default=1.1)
    p.add_argument("--tpast", type=int, default=5)
    p.add_argument("--tfreq", type=int, default=5)
    p.add_argument("--gth", type=float, default=10.0)
    p.add_argument("--repair-fraction", type=float, default=0.5)
    p.add_argument("--association-metric", default=None,
                   choices=["ASF", "PDM", "PBI"],
                   help="override the host algorithm's association metric")
    p.add_argument("--pc", type=float, default=0.9, help="SBX probability")
    p.add_argument("--etac", type=float, default=10.0, help="SBX index")
    p.add_argument("--pm", type=float, default=0.1,
                   help="mutation probability per variable")
    p.add_argument("--etam", type=float, default=20.0,
                   help="mutation distribution index")
    p.add_argument("--metrics", default="hv",
                   help="comma list from hv,gd,igd")


def _run_config_from_args(args) -> RunConfig:
    from ir2emo.algorithms.operators import GeneticParams

    algorithm, variant = parse_algorithm_id(args.algorithm)
    return RunConfig(
        problem=args.problem, M=args.objectives, algorithm=algorithm,
        variant=variant, seed=args.seed, generations=args.generations,
        pop_size=args.pop_size,
        genetic=GeneticParams(p_c=args.pc, eta_c=args.etac,
                              p_m=args.pm, eta_m=args.etam),
        ir2=Ir2Params(t_past=args.tpast, t_freq=args.tfreq, eta=args.eta,
                      g_th=args.gth, repair_fraction=args.repair_fraction,
                      association_metric=args.association_metric),
        metrics=tuple(args.metrics.split(",")))


def cmd_run(args) -> int:
    config = _run_config_from_args(args)
    if args.out:
        path = harness.execute_run(config, args.out)
        print(f"trace written to {path}")
    else:
        from ir2emo.algorithms.runner import run

        trace = run(config, on_record=lambda r: print(json.dumps(r)))
        print(f"total evaluations: {trace.n_evals}", file=sys.stderr)
    return 0


def cmd_experiment(args) -> int:
    config = harness.ExperimentConfig.from_json(args.config)
    if args.out_dir:
        config = harness.ExperimentConfig(
            problems=config.problems, algorithms=config.algorithms,
            seeds=config.seeds, generations=config.generations,
            out_dir=args.out_dir, pop_size=config.pop_size,
            metrics=config.metrics, genetic=config.genetic,
            ir2=config.ir2, moead=config.moead)
    result = harness.run_experiment(config, workers=args.workers, echo=print)
    print(f"completed={len(result['completed'])} "
          f"skipped={len(result['skipped'])} failed={len(result['failed'])}")
    return 1 if result["failed"] else 0


def cmd_report(args) -> int:
    table = harness.aggregate_and_report(args.dir, args.generation,
                                         args.base, args.ir2, args.metric)
    if not table.rows:
        print("no matching trace pairs found", file=sys.stderr)
        return 1
    cols = list(table.rows[0].keys())
    print(",".join(cols))
    for row in table.rows:
        print(",".join(str(row[c]) for c in cols))
    if args.out:
        table.to_csv(args.out + ".csv")
        table.to_json(args.out + ".json")
        print(f"written {args.out}.csv and {args.out}.json", file=sys.stderr)
    return 0


def _load_front(path: str) -> np.ndarray:
    return np.atleast_2d(np.loadtxt(path))


def cmd_metrics(args) -> int:
    F = _load_front(args.front)
    if args.indicator == "hv":
        M = F.shape[1]
        if args.suite == "wfg":
            F = F / (2.0 * np.arange(1, M + 1))
        if args.ref == "auto":
            ref = metrics.hv_reference(F.shape[0], M)
        else:
            ref = np.array([float(v) for v in args.ref.split(",")])
        print(metrics.hypervolume(F, ref))
        return 0
    if args.reference_file:
        R = _load_front(args.reference_file)
    else:
        problem = make_problem(args.problem, args.objectives)
        R = pareto_front_sample(problem, args.count).points
    print(metrics.gd_igd(F, R, args.indicator.upper()))
    return 0


def cmd_refpoints(args) -> int:
    if args.layers:
        gaps = [int(v) for v in args.layers.split(",")]
        shrink = [float(v) for v in args.shrink.split(",")]
        refset = layered_points(args.objectives, gaps, shrink)
    else:
        refset = das_dennis(args.objectives, args.gaps)
    if args.stats:
        frac = refset.boundary_fraction()
        print(f"points: {len(refset)}")
        print(f"boundary_fraction: {frac:.4f} ({frac * 100:.1f}%)")
    else:
        for point in refset.points:
            print(" ".join(f"{v:.12f}" for v in point))
    return 0


def cmd_problems(args) -> int:
    if args.action == "list":
        print("name,objectives,n_var")
        for row in list_problems():
            opts = "/".join(str(m) for m in row["objectives"])
            print(f"{row['name']},{opts},{row['n_var']}")
        return 0
    raise SystemExit(f"unknown problems action {args.action!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ir2emo", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute a single seeded run")
    _add_run_flags(p)
    p.add_argument("--out", default=None, help="directory for the trace file")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("experiment", help="run a sweep from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", default=None)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("report", help="aggregate traces into a table")
    p.add_argument("--dir", required=True)
    p.add_argument("--generation", type=int, required=True)
    p.add_argument("--base", required=True, help="e.g. nsga2")
    p.add_argument("--ir2", required=True, help="e.g. nsga2-ir2")
    p.add_argument("--metric", default="hv")
    p.add_argument("--out", default=None, help="output path prefix")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("metrics", help="standalone indicators on a front file")
    p.add_argument("indicator", choices=["hv", "gd", "igd"])
    p.add_argument("front", help="text file, one objective vector per line")
    p.add_argument("--ref", default="auto",
                   help='"auto" for [N/(N-1)]^M or comma-separated values')
    p.add_argument("--suite", choices=["wfg", "none"], default="none",
                   help="wfg pre-normalizes objective i by 2i")
    p.add_argument("--reference-file", default=None,
                   help="reference front file for gd/igd")
    p.add_argument("--problem", default="ZDT1",
                   help="analytic front for gd/igd when no file given")
    p.add_argument("--objectives", "-M", type=int, default=2)
    p.add_argument("--count", type=int, default=500)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("refpoints", help="reference point generation")
    rsub = p.add_subparsers(dest="action", required=True)
    g = rsub.add_parser("gen")
    g.add_argument("--objectives", "-M", type=int, required=True)
    g.add_argument("--gaps", "-p", type=int, default=None)
    g.add_argument("--layers", default=None, help="comma list of per-layer gaps")
    g.add_argument("--shrink", default=None,
                   help="comma list of per-layer shrink factors")
    g.add_argument("--stats", action="store_true",
                   help="print count and boundary fraction instead of points")
    g.set_defaults(func=cmd_refpoints)

    p = sub.add_parser("problems", help="problem registry")
    p.add_argument("action", choices=["list"])
    p.set_defaults(func=cmd_problems)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
