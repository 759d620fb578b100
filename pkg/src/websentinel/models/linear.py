"""Linear SVM trained with the Pegasos stochastic subgradient schedule.

Hinge loss plus (lambda/2)||w||^2, step size 1/(lambda*t). The bias is
updated from the hinge subgradient but left unregularized. Probabilities
come from a sigmoid over the margin -- a calibration approximation that
is adequate for ensemble averaging.
"""

from __future__ import annotations

import numpy as np

from ..errors import DimensionMismatch, InvalidConfig
from .boosting import sigmoid


class LinearSvm:
    def __init__(self, weights: np.ndarray, bias: float, lam: float):
        self.weights = np.asarray(weights, dtype=np.float64)
        self.bias = float(bias)
        self.lam = float(lam)

    def decision_one(self, x) -> float:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != self.weights.shape:
            raise DimensionMismatch(
                f"expected {self.weights.shape[0]} features, got {x.shape}"
            )
        return float(self.weights @ x + self.bias)

    def predict_one(self, x) -> float:
        return float(sigmoid(self.decision_one(x)))

    def predict_matrix(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        return sigmoid(X @ self.weights + self.bias)

    def to_dict(self) -> dict:
        return {
            "weights": self.weights.tolist(),
            "bias": self.bias,
            "lambda": self.lam,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LinearSvm":
        return cls(weights=np.array(data["weights"]), bias=data["bias"],
                   lam=data["lambda"])


def train_svm(X, y, lam: float = 1e-4, epochs: int = 30, seed: int = 0) -> LinearSvm:
    """Pegasos over shuffled epochs; labels are recoded to +/-1 internally."""
    if lam <= 0:
        raise InvalidConfig(f"lambda must be > 0 (got {lam})")
    if epochs < 1:
        raise InvalidConfig(f"epochs must be >= 1 (got {epochs})")
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    classes = np.unique(y)
    if len(classes) < 2:
        raise InvalidConfig("SVM training needs both classes present")

    signed = np.where(y == 1, 1.0, -1.0)
    n, d = X.shape
    rng = np.random.default_rng(seed)
    w = np.zeros(d)
    b = 0.0
    t = 0
    for _ in range(epochs):
        for i in rng.permutation(n):
            t += 1
            eta = 1.0 / (lam * t)
            margin = signed[i] * (w @ X[i] + b)
            # Points with margin >= 1 sit on the hinge's flat region and
            # contribute only the regularizer to the subgradient.
            w *= 1.0 - eta * lam
            if margin < 1.0:
                w += eta * signed[i] * X[i]
                b += eta * signed[i]
    return LinearSvm(weights=w, bias=b, lam=lam)
