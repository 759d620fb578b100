"""Gradient boosting with logistic loss.

Each round fits a variance-reduction regression tree to the current
residuals y - p and adds it with a constant learning rate. Because the
leaf means are an orthogonal projection of the residual vector, any
learning rate well below the curvature bound strictly decreases training
log-loss round over round; the acceptance suite asserts monotonicity.
"""

from __future__ import annotations

import logging

import numpy as np

from ..errors import InvalidConfig
from .trees import RegressionTree

log = logging.getLogger(__name__)

PROB_CLAMP = 1e-6


def sigmoid(z):
    # Stable split form: never exponentiates a positive argument.
    scalar = np.isscalar(z) or getattr(z, "ndim", 0) == 0
    arr = np.atleast_1d(np.asarray(z, dtype=np.float64))
    out = np.empty_like(arr)
    pos = arr >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-arr[pos]))
    ez = np.exp(arr[~pos])
    out[~pos] = ez / (1.0 + ez)
    return float(out[0]) if scalar else out


def log_loss(y, p) -> float:
    p = np.clip(p, 1e-12, 1 - 1e-12)
    return float(-np.mean(y * np.log(p) + (1 - y) * np.log(1 - p)))


class GradientBoosting:
    def __init__(self, base_log_odds: float, stages: list[tuple[RegressionTree, float]]):
        self.base_log_odds = base_log_odds
        self.stages = stages

    def decision_matrix(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        f = np.full(len(X), self.base_log_odds)
        for tree, lr in self.stages:
            f += lr * tree.predict_matrix(X)
        return f

    def predict_one(self, x) -> float:
        f = self.base_log_odds
        for tree, lr in self.stages:
            f += lr * tree.predict_one(x)
        return float(sigmoid(f))

    def predict_matrix(self, X) -> np.ndarray:
        return sigmoid(self.decision_matrix(X))

    def to_dict(self) -> dict:
        return {
            "base_log_odds": self.base_log_odds,
            "stages": [
                {"tree": tree.to_dict(), "learning_rate": lr}
                for tree, lr in self.stages
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GradientBoosting":
        stages = [
            (RegressionTree.from_dict(s["tree"]), s["learning_rate"])
            for s in data["stages"]
        ]
        return cls(base_log_odds=data["base_log_odds"], stages=stages)


def train_gbm(
    X,
    y,
    n_rounds: int = 50,
    learning_rate: float = 0.1,
    max_depth: int = 3,
    min_samples_leaf: int = 1,
    loss_trace: list | None = None,
) -> GradientBoosting:
    """Train; pass loss_trace to capture per-round training log-loss."""
    if n_rounds < 0:
        raise InvalidConfig(f"n_rounds must be >= 0 (got {n_rounds})")
    if learning_rate < 0:
        raise InvalidConfig(f"learning_rate must be >= 0 (got {learning_rate})")
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if len(y) == 0:
        raise InvalidConfig("cannot train GBM on an empty dataset")

    base_rate = float(np.mean(y))
    if base_rate <= 0.0 or base_rate >= 1.0:
        # Degenerate base rate (single-class data): clamp and continue with
        # an (almost) prior-only model rather than failing the pipeline.
        log.warning("GBM trained on single-class data; clamping base rate")
    base_rate = min(max(base_rate, PROB_CLAMP), 1 - PROB_CLAMP)
    base_log_odds = float(np.log(base_rate / (1 - base_rate)))

    f = np.full(len(y), base_log_odds)
    stages: list[tuple[RegressionTree, float]] = []
    if loss_trace is not None:
        loss_trace.append(log_loss(y, sigmoid(f)))
    for _ in range(n_rounds):
        residual = y - sigmoid(f)
        tree = RegressionTree(max_depth, min_samples_leaf).fit(X, residual)
        f = f + learning_rate * tree.predict_matrix(X)
        stages.append((tree, learning_rate))
        if loss_trace is not None:
            loss_trace.append(log_loss(y, sigmoid(f)))
    return GradientBoosting(base_log_odds, stages)
