"""CART-style trees: Gini classification and variance-reduction regression.

Split-selection contract (shared by both criteria):
  - candidate thresholds are midpoints between consecutive distinct sorted
    values of a feature;
  - the chosen split maximizes the impurity/variance decrease;
  - ties break toward the lowest feature index, then the lowest threshold;
  - splits producing a child smaller than min_samples_leaf are skipped.

Routing uses "value <= threshold goes left". Nodes serialize to a flat
array with integer child links, so trained trees are plain JSON.
"""

from __future__ import annotations

import numpy as np

from ..errors import DimensionMismatch, InvalidConfig


def _gini_candidates(col_sorted: np.ndarray, y_sorted: np.ndarray,
                     min_samples_leaf: int):
    """Vectorized Gini gain at every valid midpoint of one sorted column.

    Returns (thresholds, gains); empty arrays when no candidate exists.
    """
    n = len(y_sorted)
    distinct = np.flatnonzero(col_sorted[:-1] != col_sorted[1:])
    if len(distinct) == 0:
        return np.empty(0), np.empty(0)

    n_left = (distinct + 1).astype(np.float64)
    n_right = n - n_left
    valid = (n_left >= min_samples_leaf) & (n_right >= min_samples_leaf)
    distinct = distinct[valid]
    if len(distinct) == 0:
        return np.empty(0), np.empty(0)
    n_left = n_left[valid]
    n_right = n_right[valid]

    cum_pos = np.cumsum(y_sorted)
    total_pos = cum_pos[-1]
    pos_left = cum_pos[distinct].astype(np.float64)
    pos_right = total_pos - pos_left
    neg_left = n_left - pos_left
    neg_right = n_right - pos_right

    p0l = neg_left / n_left
    p1l = pos_left / n_left
    p0r = neg_right / n_right
    p1r = pos_right / n_right
    gini_left = 1.0 - (p0l * p0l + p1l * p1l)
    gini_right = 1.0 - (p0r * p0r + p1r * p1r)

    p0 = (n - total_pos) / n
    p1 = total_pos / n
    parent = 1.0 - (p0 * p0 + p1 * p1)
    gains = parent - ((n_left / n) * gini_left + (n_right / n) * gini_right)

    thresholds = (col_sorted[distinct] + col_sorted[distinct + 1]) / 2.0
    return thresholds, gains


def _variance_candidates(col_sorted: np.ndarray, y_sorted: np.ndarray,
                         min_samples_leaf: int):
    """Same sweep with variance reduction as the gain."""
    n = len(y_sorted)
    distinct = np.flatnonzero(col_sorted[:-1] != col_sorted[1:])
    if len(distinct) == 0:
        return np.empty(0), np.empty(0)

    n_left = (distinct + 1).astype(np.float64)
    n_right = n - n_left
    valid = (n_left >= min_samples_leaf) & (n_right >= min_samples_leaf)
    distinct = distinct[valid]
    if len(distinct) == 0:
        return np.empty(0), np.empty(0)
    n_left = n_left[valid]
    n_right = n_right[valid]

    cum_s = np.cumsum(y_sorted)
    cum_s2 = np.cumsum(y_sorted * y_sorted)
    s_left = cum_s[distinct]
    s2_left = cum_s2[distinct]
    s_right = cum_s[-1] - s_left
    s2_right = cum_s2[-1] - s2_left

    mean_l = s_left / n_left
    mean_r = s_right / n_right
    var_left = s2_left / n_left - mean_l * mean_l
    var_right = s2_right / n_right - mean_r * mean_r

    mean_all = cum_s[-1] / n
    var_parent = cum_s2[-1] / n - mean_all * mean_all
    gains = var_parent - ((n_left / n) * var_left + (n_right / n) * var_right)

    thresholds = (col_sorted[distinct] + col_sorted[distinct + 1]) / 2.0
    return thresholds, gains


def best_split(
    X: np.ndarray,
    y: np.ndarray,
    min_samples_leaf: int = 1,
    feature_indices=None,
    criterion: str = "gini",
):
    """Best (feature, threshold, gain) over the allowed features, or None.

    Any valid candidate qualifies, zero-gain included -- recursing through
    flat splits is what lets a depth-2 tree solve XOR-style interactions.
    Ties break toward the lowest feature index then the lowest threshold
    (the per-feature sweep returns candidates in ascending threshold
    order, so the first maximum wins).
    """
    n, d = X.shape
    if feature_indices is None:
        feature_indices = range(d)
    sweep = _gini_candidates if criterion == "gini" else _variance_candidates

    best = None
    for j in feature_indices:
        col = X[:, j]
        order = np.argsort(col, kind="stable")
        thresholds, gains = sweep(col[order], y[order], min_samples_leaf)
        if len(gains) == 0:
            continue
        k = int(np.argmax(gains))
        if best is None or gains[k] > best[2]:
            best = (int(j), float(thresholds[k]), float(gains[k]))
    return best


class _TreeBase:
    """Flat-array tree shared by the classification/regression variants."""

    criterion = "gini"
    leaf_value_key = "fraud_fraction"

    def __init__(self, max_depth: int = 8, min_samples_leaf: int = 1):
        if max_depth < 1:
            raise InvalidConfig(f"max_depth must be >= 1 (got {max_depth})")
        if min_samples_leaf < 1:
            raise InvalidConfig(f"min_samples_leaf must be >= 1 (got {min_samples_leaf})")
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.nodes: list[dict] = []
        self.n_features = 0

    def _leaf_value(self, y: np.ndarray) -> float:
        raise NotImplementedError

    def _is_pure(self, y: np.ndarray) -> bool:
        raise NotImplementedError

    def fit(self, X, y, feature_indices=None):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if len(y) == 0:
            raise InvalidConfig("cannot train a tree on an empty dataset")
        self.n_features = X.shape[1]
        self.nodes = []
        self._build(X, y, depth=0, feature_indices=feature_indices)
        return self

    def _build(self, X, y, depth, feature_indices) -> int:
        index = len(self.nodes)
        self.nodes.append({})  # reserve slot; children get appended after

        split = None
        if depth < self.max_depth and not self._is_pure(y):
            split = best_split(
                X, y, self.min_samples_leaf, feature_indices, self.criterion
            )
        if split is None:
            self.nodes[index] = {
                self.leaf_value_key: self._leaf_value(y),
                "sample_count": int(len(y)),
            }
            return index

        feature, threshold, _gain = split
        mask = X[:, feature] <= threshold
        left = self._build(X[mask], y[mask], depth + 1, feature_indices)
        right = self._build(X[~mask], y[~mask], depth + 1, feature_indices)
        self.nodes[index] = {
            "feature_index": feature,
            "threshold": threshold,
            "left": left,
            "right": right,
        }
        return index

    def predict_one(self, x) -> float:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.n_features,):
            raise DimensionMismatch(
                f"expected {self.n_features} features, got {x.shape}"
            )
        node = self.nodes[0]
        while "feature_index" in node:
            if x[node["feature_index"]] <= node["threshold"]:
                node = self.nodes[node["left"]]
            else:
                node = self.nodes[node["right"]]
        return node[self.leaf_value_key]

    def predict_matrix(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != self.n_features:
            raise DimensionMismatch(
                f"expected {self.n_features} features, got {X.shape[1]}"
            )
        out = np.empty(len(X))
        # Route all rows level by level; cheap at desk scale.
        active = {0: np.arange(len(X))}
        while active:
            next_active = {}
            for node_idx, rows in active.items():
                node = self.nodes[node_idx]
                if "feature_index" in node:
                    go_left = X[rows, node["feature_index"]] <= node["threshold"]
                    left_rows = rows[go_left]
                    right_rows = rows[~go_left]
                    if len(left_rows):
                        next_active.setdefault(node["left"], []).append(left_rows)
                    if len(right_rows):
                        next_active.setdefault(node["right"], []).append(right_rows)
                else:
                    out[rows] = node[self.leaf_value_key]
            active = {
                k: np.concatenate(v) for k, v in next_active.items()
            }
        return out

    def to_dict(self) -> dict:
        return {
            "params": {
                "max_depth": self.max_depth,
                "min_samples_leaf": self.min_samples_leaf,
            },
            "n_features": self.n_features,
            "nodes": self.nodes,
        }

    @classmethod
    def from_dict(cls, data: dict):
        tree = cls(
            max_depth=data["params"]["max_depth"],
            min_samples_leaf=data["params"]["min_samples_leaf"],
        )
        tree.n_features = data["n_features"]
        tree.nodes = data["nodes"]
        return tree


class DecisionTree(_TreeBase):
    """Binary classifier; leaves store the fraud fraction of their samples."""

    criterion = "gini"
    leaf_value_key = "fraud_fraction"

    def _leaf_value(self, y):
        return float(np.mean(y))

    def _is_pure(self, y):
        return bool(np.all(y == y[0]))


class RegressionTree(_TreeBase):
    """Squared-error regressor for boosting stages; leaves store the mean."""

    criterion = "variance"
    leaf_value_key = "value"

    def _leaf_value(self, y):
        return float(np.mean(y))

    def _is_pure(self, y):
        return bool(np.all(y == y[0]))


def train_tree(X, y, max_depth: int = 8, min_samples_leaf: int = 1,
               feature_indices=None) -> DecisionTree:
    return DecisionTree(max_depth, min_samples_leaf).fit(X, y, feature_indices)
