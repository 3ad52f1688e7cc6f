"""Acceptance suite: one test per criterion, each printing a pass/fail line.

The experiment-backed criteria store their run traces under
tests/.acceptance_cache (override with IR2EMO_ACCEPTANCE_CACHE); completed
traces are reused on re-runs, so only the first execution pays the full
cost. Run with `pytest -m acceptance -s` to watch progress.
"""

import math
import os
import time

import numpy as np
import pytest

from ir2emo import kernels
from ir2emo.algorithms import Ir2Params, RunConfig, run
from ir2emo.core import RandomSource
from ir2emo.harness import ExperimentConfig, aggregate_and_report, run_experiment
from ir2emo.metrics import hypervolume, median_low, recovery_savings, wilcoxon_ranksum
from ir2emo.refassoc import das_dennis

pytestmark = pytest.mark.acceptance

CACHE_DIR = os.environ.get(
    "IR2EMO_ACCEPTANCE_CACHE",
    os.path.join(os.path.dirname(__file__), ".acceptance_cache"))
WORKERS = max(1, min(2, os.cpu_count() or 1))
SEEDS = tuple(range(1, 12))


def report(num: int, description: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    print(f"[criterion {num:02d}] {status}  {description}  {detail}".rstrip())
    assert ok, f"criterion {num} failed: {description} {detail}"


def sweep(problems, algorithms, generations):
    config = ExperimentConfig(problems=tuple(problems),
                              algorithms=tuple(algorithms), seeds=SEEDS,
                              generations=generations, out_dir=CACHE_DIR)
    result = run_experiment(config, workers=WORKERS)
    assert not result["failed"], result["failed"]


def test_criterion_1_reference_point_counts():
    t0 = time.time()
    expected = {(2, 99): 100, (3, 13): 105, (4, 10): 286, (5, 8): 495}
    counts = {key: len(das_dennis(*key)) for key in expected}
    elapsed = time.time() - t0
    report(1, "Das-Dennis counts (M,p)->N exact", counts == expected and elapsed < 1.0,
           f"{counts} in {elapsed:.3f}s")


def test_criterion_2_boundary_fractions():
    t0 = time.time()
    table = {2: 2.0, 3: 37.0, 4: 70.0, 5: 93.0}
    gaps = {2: 99, 3: 13, 4: 10, 5: 8}
    measured = {M: das_dennis(M, gaps[M]).boundary_fraction() * 100
                for M in table}
    ok = all(abs(measured[M] - table[M]) <= 1.0 for M in table)
    elapsed = time.time() - t0
    report(2, "boundary-point percentages 2/37/70/93 within 1%",
           ok and elapsed < 1.0,
           " ".join(f"M{M}={measured[M]:.1f}%" for M in sorted(measured)))


def _mc_hypervolume(front, ref, n_samples, rng):
    lo = front.min(axis=0)
    box = float(np.prod(ref - lo))
    hits = 0
    done = 0
    while done < n_samples:
        chunk = min(200_000, n_samples - done)
        pts = rng.uniform(lo, ref, size=(chunk, front.shape[1]))
        dominated = np.zeros(chunk, dtype=bool)
        for row in front:
            dominated |= np.all(row <= pts, axis=1)
        hits += int(dominated.sum())
        done += chunk
    p = hits / n_samples
    sigma = math.sqrt(max(p * (1.0 - p), 1e-12) / n_samples) * box
    return p * box, sigma


def test_criterion_3_hv_oracle_equivalence():
    # 200 fronts at a 3-sigma band mean a ~0.27% false alarm per front even
    # when the exact value is right; a front that trips the band is
    # re-measured once on an independent sample (a real error is orders of
    # magnitude beyond 3 sigma and fails both draws)
    n_samples = 10_000_000
    front_rng = np.random.default_rng(20240817)
    oracle_seeds = np.random.SeedSequence(915227).spawn(400)
    worst = 0.0
    checked = 0
    retried = 0
    seed_iter = iter(oracle_seeds)
    for M in (2, 3, 4, 5):
        ref = np.full(M, 1.1)
        for _ in range(50):
            n_pts = int(front_rng.integers(5, 26))
            F = front_rng.random((n_pts * 3, M))
            F = F[kernels.nd_ranks(F) == 0][:n_pts]
            exact = hypervolume(F, ref)
            est, sigma = _mc_hypervolume(
                F, ref, n_samples, np.random.default_rng(next(seed_iter)))
            z = abs(exact - est) / max(sigma, 1e-15)
            if z > 3.0:
                retried += 1
                est, sigma = _mc_hypervolume(
                    F, ref, n_samples, np.random.default_rng(next(seed_iter)))
                z = abs(exact - est) / max(sigma, 1e-15)
            worst = max(worst, z)
            checked += 1
            assert z <= 3.0, (M, exact, est, sigma, z)
    report(3, "exact HV within 3 sigma of 1e7-sample Monte-Carlo oracle",
           worst <= 3.0, f"{checked} fronts, worst z={worst:.2f}, retried={retried}")


@pytest.mark.parametrize("algorithm,problem,M", [
    ("nsga2", "ZDT1", 2),
    ("nsga3", "DTLZ2", 3),
    ("moead", "DTLZ2", 3),
])
def test_criterion_4_fallback_equivalence(algorithm, problem, M):
    base = run(RunConfig(problem=problem, M=M, algorithm=algorithm,
                         variant="base", seed=17, generations=50,
                         keep_populations=True))
    gated = run(RunConfig(problem=problem, M=M, algorithm=algorithm,
                          variant="ir2", seed=17, generations=50,
                          keep_populations=True,
                          ir2=Ir2Params(force_gate_off=True)))
    identical = all(
        np.array_equal(a.X, b.X) and np.array_equal(a.F, b.F)
        for a, b in zip(base.populations, gated.populations))
    report(4, f"gate-off IR2 bit-identical to base ({algorithm}/{problem})",
           identical, "50 generations")


def test_criterion_5_zdt_improvement():
    sweep([("ZDT1", 2), ("ZDT2", 2), ("ZDT6", 2)],
          ["nsga2", "nsga2-ir2"], generations=100)
    table = aggregate_and_report(CACHE_DIR, 100, "nsga2", "nsga2-ir2")
    rows = {r["problem"]: r for r in table.rows if r["problem"].startswith("ZDT")}
    details = []
    ok = True
    for name in ("ZDT1", "ZDT2", "ZDT6"):
        row = rows[name]
        base, ir2 = row["median_nsga2"], row["median_nsga2-ir2"]
        better = ir2 > base
        ok &= better
        details.append(f"{name}: {base:.4f} -> {ir2:.4f}")
    z1 = rows["ZDT1"]
    in_band = (abs(z1["median_nsga2"] - 0.6755) <= 0.01
               and abs(z1["median_nsga2-ir2"] - 0.6791) <= 0.01)
    ok &= in_band
    report(5, "ZDT1/2/6 median HV improves; ZDT1 absolutes in 0.6755/0.6791 +-0.01",
           ok, "; ".join(details) + f"; band={'yes' if in_band else 'NO'}")


def test_criterion_6_wfg_improvement_gen40():
    sweep([("WFG4", 3), ("WFG6", 3)], ["nsga3", "nsga3-ir2"], generations=40)
    sweep([("WFG7", 3)], ["moead", "moead-ir2"], generations=40)
    details = []
    ok = True
    for base_id, ir2_id, name in [("nsga3", "nsga3-ir2", "WFG4"),
                                  ("nsga3", "nsga3-ir2", "WFG6"),
                                  ("moead", "moead-ir2", "WFG7")]:
        table = aggregate_and_report(CACHE_DIR, 40, base_id, ir2_id)
        row = next(r for r in table.rows if r["problem"] == name)
        base, ir2 = row[f"median_{base_id}"], row[f"median_{ir2_id}"]
        p = row["p_one_sided"]
        good = ir2 > base and p < 0.05
        ok &= good
        details.append(f"{name}-3: {base:.4f} -> {ir2:.4f} (p={p:.1e})")
    report(6, "WFG4-3/WFG6-3 (NSGA-III) and WFG7-3 (MOEA/D) improve at gen 40, p<0.05",
           ok, "; ".join(details))


def test_criterion_7_savings_arithmetic():
    series = np.zeros(120)

    def with_crossing(at):
        s = series.copy()
        s[at:] = 0.5
        return s

    cases = [
        (recovery_savings(with_crossing(55), 0.5, 40), 55, 37.5),
        (recovery_savings(with_crossing(40), 0.5, 40), 40, 0.0),
        (recovery_savings(with_crossing(39), 0.5, 40), 39, -2.5),
    ]
    ok = all(r.recovery == g and r.savings_pct == s for r, g, s in cases)
    report(7, "savings triples (40,55)->37.5, (40,40)->0.0, (40,39)->-2.5 exact",
           ok, " ".join(f"{r.savings_pct:+.1f}" for r, _, _ in cases))


def test_criterion_8_termination_thresholds():
    from ir2emo.repair import LearningGate, repair_gate

    series = [1.0, 0.8, 0.6, 0.4, 0.2, 0.1, 0.08, 0.05]

    def first_disabled(g_th):
        gate = LearningGate(g_th=g_th, t_freq=1)
        for i, g in enumerate(series):
            if not repair_gate(gate, g, i + 1):
                return i
        return None

    d10 = first_disabled(10.0)
    d5 = first_disabled(5.0)
    d0 = first_disabled(0.0)
    ok = d10 is not None and d5 is not None and d10 <= d5 and d0 is None
    report(8, "g_th=10% disables no later than 5%; g_th=0 never disables",
           ok, f"disable idx: 10%={d10} 5%={d5} 0%={d0}")


def test_criterion_9_repair_unit_suite():
    from ir2emo import repair as ir2

    checks = {}
    # enhancement identity at eta=1
    x = np.array([0.4, 0.7])
    checks["eta1"] = np.array_equal(ir2.enhance(x, np.array([0.9, 0.1]), 1.0),
                                    [0.9, 0.1])

    # near-bound restoration at vicinity zero
    class Stub:
        xmin = np.array([0.2, 0.0])
        xmax = np.array([1.0, 1.0])

        def predict(self, X):
            return np.full_like(np.atleast_2d(X), 0.5)

    out = ir2.repair_vectors(np.array([[0.2, 0.5]]), Stub(), 1.0,
                             (np.zeros(2), np.ones(2)),
                             RandomSource(0).stream("repair"))
    checks["nearbound"] = out[0, 0] == 0.2

    # boundary containment
    gen = RandomSource(1)
    checks["containment"] = all(
        0.0 <= ir2.boundary_repair(v, 0.0, 1.0, 0.5, gen) <= 1.0
        for v in (-3.0, -0.01, 1.001, 9.9))

    # floor(N/2) selection count
    class Marker:
        xmin = np.zeros(3)
        xmax = np.ones(3)

        def predict(self, X):
            return np.full_like(np.atleast_2d(X), 0.123)

    from ir2emo.core import Population

    counts_ok = True
    for N in (8, 9, 105):
        Q = Population(np.random.default_rng(N).random((N, 3)) * 0.5 + 0.25)
        repaired = ir2.repair_offspring(Q, Marker(), 1.0,
                                        (np.zeros(3), np.ones(3)),
                                        RandomSource(2))
        counts_ok &= int(np.any(repaired.X != Q.X, axis=1).sum()) == N // 2
    checks["half"] = counts_ok
    report(9, "repair unit suite: eta identity, near-bound, containment, floor(N/2)",
           all(checks.values()), str(checks))


def test_criterion_10_forest_properties():
    from dataclasses import replace

    from ir2emo import forest as rf

    rng = np.random.default_rng(0)
    checks = {}

    data1 = rf.TrainingDataset(np.array([[0.3, 0.7]]), np.array([[0.9, 0.2]]))
    m1 = rf.fit(data1, rf.ForestParams.for_dataset(data1), RandomSource(1))
    checks["single"] = np.array_equal(rf.predict(m1, rng.random((4, 2))),
                                      np.tile([0.9, 0.2], (4, 1)))

    Xc = rng.random((25, 3))
    const = rf.TrainingDataset(Xc, np.tile([0.5, 0.25], (25, 1)))
    mc = rf.fit(const, rf.ForestParams.for_dataset(const), RandomSource(2))
    checks["const"] = np.allclose(rf.predict(mc, rng.random((6, 3))),
                                  np.tile([0.5, 0.25], (6, 1)), atol=1e-12)

    X = rng.random((40, 3))
    Y = rng.random((40, 2)) * 6 - 3
    data = rf.TrainingDataset(X, Y)
    model = rf.fit(data, rf.ForestParams.for_dataset(data), RandomSource(3))
    pred = rf.predict(model, rng.random((50, 3)) * 1.4 - 0.2)
    checks["contain"] = bool(np.all(pred >= Y.min(axis=0) - 1e-12)
                             and np.all(pred <= Y.max(axis=0) + 1e-12))

    # split optimality vs exhaustive enumeration on a <=50-sample dataset
    from test_forest import oracle_tree_error

    Xs = np.round(rng.random((30, 3)), 1)
    Ys = rng.random((30, 2))
    ds = rf.TrainingDataset(Xs, Ys)
    single = rf.fit(ds, replace(rf.ForestParams.for_dataset(ds), n_trees=1,
                                bootstrap=False), RandomSource(4))
    my_err = float(((rf.predict(single, Xs) - Ys) ** 2).sum())
    checks["optimal"] = my_err <= oracle_tree_error(Xs, Ys) + 1e-9

    m_a = rf.fit(data, rf.ForestParams.for_dataset(data), RandomSource(9))
    m_b = rf.fit(data, rf.ForestParams.for_dataset(data), RandomSource(9))
    queries = rng.random((10, 3))
    checks["seeded"] = np.array_equal(rf.predict(m_a, queries),
                                      rf.predict(m_b, queries))
    report(10, "forest: single-sample, constant, containment, optimality, determinism",
           all(checks.values()), str(checks))
