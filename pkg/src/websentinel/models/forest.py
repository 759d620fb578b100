"""Random forest over the CART classifier: bagging + random feature subsets."""

from __future__ import annotations

import math

import numpy as np

from ..errors import DimensionMismatch, InvalidConfig
from .trees import DecisionTree


class RandomForest:
    def __init__(self, trees: list[DecisionTree], feature_subsets: list[list[int]],
                 n_trees: int, bootstrap: bool, seed: int):
        self.trees = trees
        self.feature_subsets = feature_subsets
        self.n_trees = n_trees
        self.bootstrap = bootstrap
        self.seed = seed

    def predict_one(self, x) -> float:
        # Exact arithmetic mean of the member trees' outputs.
        total = 0.0
        for tree in self.trees:
            total += tree.predict_one(x)
        return total / len(self.trees)

    def predict_matrix(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        total = np.zeros(len(X))
        for tree in self.trees:
            total += tree.predict_matrix(X)
        return total / len(self.trees)

    def to_dict(self) -> dict:
        return {
            "params": {
                "n_trees": self.n_trees,
                "bootstrap": self.bootstrap,
                "seed": self.seed,
            },
            "feature_subsets": self.feature_subsets,
            "trees": [t.to_dict() for t in self.trees],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RandomForest":
        return cls(
            trees=[DecisionTree.from_dict(t) for t in data["trees"]],
            feature_subsets=data["feature_subsets"],
            n_trees=data["params"]["n_trees"],
            bootstrap=data["params"]["bootstrap"],
            seed=data["params"]["seed"],
        )


def train_forest(
    X,
    y,
    n_trees: int = 15,
    seed: int = 0,
    bootstrap: bool = True,
    max_depth: int = 8,
    min_samples_leaf: int = 2,
    subset_size: int | None = None,
) -> RandomForest:
    """Each tree sees a bootstrap resample and ceil(sqrt(d)) random features."""
    if n_trees < 1:
        raise InvalidConfig(f"n_trees must be >= 1 (got {n_trees})")
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n, d = X.shape
    if n == 0:
        raise InvalidConfig("cannot train a forest on an empty dataset")
    if subset_size is None:
        subset_size = math.ceil(math.sqrt(d))
    if not (1 <= subset_size <= d):
        raise DimensionMismatch(f"subset_size {subset_size} out of range for d={d}")

    rng = np.random.default_rng(seed)
    trees, subsets = [], []
    for _ in range(n_trees):
        rows = rng.integers(0, n, size=n) if bootstrap else np.arange(n)
        subset = np.sort(rng.choice(d, size=subset_size, replace=False))
        tree = DecisionTree(max_depth, min_samples_leaf)
        tree.fit(X[rows], y[rows], feature_indices=subset.tolist())
        trees.append(tree)
        subsets.append(subset.tolist())
    return RandomForest(trees, subsets, n_trees, bootstrap, seed)
