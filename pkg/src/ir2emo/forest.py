"""Multi-target random-forest regressor built from scratch.

CART regression trees with axis-aligned splits chosen by exhaustive scan
over all features and midpoint thresholds, minimizing total MSE summed
across output dimensions; bagging over bootstrap resamples; prediction is
the per-component mean of tree leaf outputs. Tree construction runs in the
kernel backend (compiled or pure), seeded per tree so training is
deterministic for a given (data, params, seed).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ir2emo import kernels
from ir2emo.core import ContractViolation, RandomSource


@dataclass(frozen=True)
class TrainingDataset:
    """Input/output decision-vector pairs, normalized to [0, 1]."""

    inputs: np.ndarray   # (rows, n_var)
    outputs: np.ndarray  # (rows, n_var)

    def __post_init__(self):
        ins = np.ascontiguousarray(self.inputs, dtype=np.float64)
        outs = np.ascontiguousarray(self.outputs, dtype=np.float64)
        if ins.shape[0] != outs.shape[0]:
            raise ContractViolation(
                f"inputs have {ins.shape[0]} rows, outputs {outs.shape[0]}")
        object.__setattr__(self, "inputs", ins)
        object.__setattr__(self, "outputs", outs)

    def __len__(self) -> int:
        return self.inputs.shape[0]


@dataclass(frozen=True)
class ForestParams:
    """Forest hyperparameters.

    n_trees is set to the dataset size and n_features to the variable count
    at construction (every split scans all features); the remaining knobs
    keep the usual defaults: split nodes of >= 2 samples, leaves of >= 1,
    unbounded depth, bootstrap resampling at full dataset size.
    """

    n_trees: int
    n_features: int
    min_samples_split: int = 2
    min_samples_leaf: int = 1
    max_depth: int | None = None
    bootstrap: bool = True

    @staticmethod
    def for_dataset(data: TrainingDataset) -> "ForestParams":
        return ForestParams(n_trees=len(data), n_features=data.inputs.shape[1])


@dataclass(frozen=True)
class Forest:
    """Trained forest: a list of (feature, thresh, left, right, values)
    tuples plus the params and seed that produced it."""

    trees: list = field(repr=False)
    params: ForestParams = None
    seed: int = 0
    n_outputs: int = 0


def fit(data: TrainingDataset, params: ForestParams, rng: RandomSource) -> Forest:
    """Train the forest.

    Each tree grows on its own bootstrap resample (with replacement, size
    len(data)) when params.bootstrap is set, using a generator seeded from
    the "forest" stream keyed by tree index.
    """
    n = len(data)
    if n == 0:
        raise ContractViolation("cannot fit a forest on an empty dataset")
    X, Y = data.inputs, data.outputs
    max_depth = -1 if params.max_depth is None else int(params.max_depth)
    seeds = rng.derive_seeds("forest", params.n_trees)
    trees = []
    for i in range(params.n_trees):
        if params.bootstrap:
            tree_rng = np.random.Generator(np.random.PCG64(int(seeds[i])))
            rows = tree_rng.integers(0, n, size=n)
            Xb = np.ascontiguousarray(X[rows])
            Yb = np.ascontiguousarray(Y[rows])
        else:
            Xb, Yb = X, Y
        order = np.ascontiguousarray(
            np.argsort(Xb, axis=0, kind="stable").T.astype(np.int32))
        trees.append(kernels.build_tree(Xb, Yb, order,
                                        params.min_samples_split,
                                        params.min_samples_leaf, max_depth))
    return Forest(trees=trees, params=params, seed=rng.seed,
                  n_outputs=Y.shape[1])


def predict(forest: Forest, X: np.ndarray) -> np.ndarray:
    """Componentwise mean of per-tree leaf outputs for each query row.

    Queries may fall outside [0, 1]; threshold routing handles them.
    """
    if not forest.trees:
        raise ContractViolation("forest has no trees (unfitted?)")
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    acc = np.zeros((X.shape[0], forest.n_outputs))
    for tree in forest.trees:
        acc += kernels.tree_predict(X, *tree)
    return acc / len(forest.trees)


def dump(forest: Forest, path: str) -> None:
    """Debug serialization: one JSON document with flattened tree arrays."""
    doc = {
        "seed": forest.seed,
        "n_outputs": forest.n_outputs,
        "params": vars(forest.params) if forest.params else None,
        "trees": [
            {"feature": t[0].tolist(), "thresh": t[1].tolist(),
             "left": t[2].tolist(), "right": t[3].tolist(),
             "values": t[4].tolist()}
            for t in forest.trees
        ],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load(path: str) -> Forest:
    with open(path) as fh:
        doc = json.load(fh)
    trees = [
        (np.array(t["feature"], dtype=np.int32), np.array(t["thresh"]),
         np.array(t["left"], dtype=np.int32), np.array(t["right"], dtype=np.int32),
         np.array(t["values"]))
        for t in doc["trees"]
    ]
    params = ForestParams(**doc["params"]) if doc["params"] else None
    return Forest(trees=trees, params=params, seed=doc["seed"],
                  n_outputs=doc["n_outputs"])
