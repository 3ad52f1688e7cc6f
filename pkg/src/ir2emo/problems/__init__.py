"""Benchmark problem registry: modified ZDT1-4/6, DTLZ1-4, WFG1-9 plus the
hardened WFG4/WFG7 variants, and true-front samplers for GD/IGD."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from ir2emo.core import ConfigurationError, ProblemDefinition, UnsupportedError
from ir2emo.problems import dtlz, zdt
from ir2emo.problems.wfg import WfgParams, WfgProblem

__all__ = ["make_problem", "pareto_front_sample", "list_problems",
           "FrontSample", "WfgParams", "WfgProblem"]

_ZDT_FUNCS = {"ZDT1": zdt.zdt1, "ZDT2": zdt.zdt2, "ZDT3": zdt.zdt3,
              "ZDT4": zdt.zdt4, "ZDT6": zdt.zdt6}
_DTLZ_FUNCS = {"DTLZ1": dtlz.dtlz1, "DTLZ2": dtlz.dtlz2,
               "DTLZ3": dtlz.dtlz3, "DTLZ4": dtlz.dtlz4}
_WFG_NAMES = [f"WFG{i}" for i in range(1, 10)] + ["WFG4-mod", "WFG7-mod"]


@dataclass(frozen=True)
class FrontSample:
    """Points on a problem's true Pareto front plus a spacing descriptor."""

    points: np.ndarray
    spacing: str


def list_problems() -> list[dict]:
    """Registry rows: name, valid objective counts, variable count."""
    rows = [{"name": n, "objectives": [2], "n_var": zdt.N_VAR}
            for n in _ZDT_FUNCS]
    rows += [{"name": n, "objectives": [3, 4, 5], "n_var": dtlz.N_VAR}
             for n in _DTLZ_FUNCS]
    rows += [{"name": n, "objectives": [3, 4], "n_var": 24} for n in _WFG_NAMES]
    return rows


def make_problem(name: str, M: int | None = None,
                 variant_params: WfgParams | None = None) -> ProblemDefinition:
    """Build a ProblemDefinition by registry name.

    M defaults to 2 for ZDT and is required for DTLZ/WFG. variant_params
    applies only to the WFG problems with exposed shape parameters.
    """
    key = name.upper().replace("_", "-")
    if key in _ZDT_FUNCS:
        if M is None:
            M = 2
        if M != 2:
            raise ConfigurationError(f"{key} is a two-objective problem")
        if variant_params is not None:
            raise ConfigurationError(f"{key} takes no variant parameters")
        n = zdt.N_VAR
        lower = np.zeros(n)
        upper = np.ones(n)
        if key == "ZDT4":
            lower[1:] = -5.0
            upper[1:] = 5.0
        func = _ZDT_FUNCS[key]
        return ProblemDefinition(key, n, 2, lower, upper, func)

    if key in _DTLZ_FUNCS:
        if M is None or M not in (3, 4, 5):
            raise ConfigurationError(f"{key} supports M in {{3,4,5}}, got {M}")
        if variant_params is not None:
            raise ConfigurationError(f"{key} takes no variant parameters")
        n = dtlz.N_VAR
        func = _DTLZ_FUNCS[key]
        return ProblemDefinition(key, n, M, np.zeros(n), np.ones(n),
                                 lambda X, _f=func, _m=M: _f(X, _m))

    if key in ("WFG4-MOD", "WFG7-MOD") or key in [w.upper() for w in _WFG_NAMES]:
        base = key[:4]
        if M is None or M not in (3, 4):
            raise ConfigurationError(f"{key} supports M in {{3,4}}, got {M}")
        if key == "WFG4-MOD":
            params = variant_params or WfgParams(70.0, 5.0, 0.35)
            display = "WFG4-mod"
        elif key == "WFG7-MOD":
            params = variant_params or WfgParams(C=100.0)
            display = "WFG7-mod"
        else:
            params = variant_params
            display = base
        inst = WfgProblem(base, M, params=params)
        meta = {"k": inst.k, "suite": "WFG"}
        if inst.params is not None:
            meta["wfg_params"] = WfgParams(*inst.params)
        return ProblemDefinition(display, inst.n, M, np.zeros(inst.n),
                                 inst.upper.copy(), inst.evaluate, params=meta)

    raise ConfigurationError(f"unknown problem {name!r}")


def _apportion(count: int, lengths: np.ndarray) -> np.ndarray:
    """Largest-remainder split of `count` points across segments."""
    share = count * lengths / lengths.sum()
    base = np.floor(share).astype(int)
    rem = count - base.sum()
    order = np.argsort(-(share - base), kind="stable")
    base[order[:rem]] += 1
    return base


def _simplex_directions(M: int, count: int) -> np.ndarray:
    from ir2emo.refassoc import das_dennis

    p = 1
    while comb(p + M - 1, M - 1) < count:
        p += 1
    return das_dennis(M, p).points[:count]


def pareto_front_sample(problem: ProblemDefinition, count: int = 500) -> FrontSample:
    """Sample `count` points on the analytic Pareto front.

    Two-objective fronts are sampled at equally spaced f1 over the front's
    f1 range (ZDT3 on its disconnected segments, points apportioned by
    segment length); DTLZ fronts use a simplex lattice. Raises
    UnsupportedError where no analytic front is wired up (WFG).
    """
    name = problem.name
    if name in ("ZDT1", "ZDT4"):
        return FrontSample(zdt.front_zdt1(np.linspace(0.0, 1.0, count)), "equal-f1")
    if name == "ZDT2":
        return FrontSample(zdt.front_zdt2(np.linspace(0.0, 1.0, count)), "equal-f1")
    if name == "ZDT6":
        f1 = np.linspace(zdt.ZDT6_F1_MIN, 1.0, count)
        return FrontSample(zdt.front_zdt2(f1), "equal-f1")
    if name == "ZDT3":
        segs = np.array(zdt.ZDT3_SEGMENTS)
        counts = _apportion(count, segs[:, 1] - segs[:, 0])
        parts = []
        for i, ((lo, hi), c) in enumerate(zip(segs, counts)):
            if c == 0:
                continue
            # a later segment's left endpoint ties with the previous right
            # endpoint in f2 (weakly dominated), so it is excluded
            f1 = np.linspace(lo, hi, c) if i == 0 else \
                np.linspace(lo, hi, c + 1)[1:]
            parts.append(zdt.front_zdt3(f1))
        return FrontSample(np.vstack(parts), "equal-f1-segmented")
    if name == "DTLZ1":
        W = _simplex_directions(problem.M, count)
        return FrontSample(0.5 * W, "simplex-lattice")
    if name in ("DTLZ2", "DTLZ3", "DTLZ4"):
        W = _simplex_directions(problem.M, count)
        norms = np.linalg.norm(W, axis=1, keepdims=True)
        return FrontSample(W / norms, "simplex-lattice")
    raise UnsupportedError(f"no analytic front sampler for {name}")
