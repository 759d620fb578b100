"""Small dense networks: an MLP classifier and a reconstruction autoencoder.

Both train full-batch with exact analytic gradients (verified against
central finite differences in the test suite) and initialize weights
uniformly in +/- 1/sqrt(fan_in) from a seeded generator, so training is a
pure function of (data, params, seed).
"""

from __future__ import annotations

import numpy as np

from ..errors import DimensionMismatch, InvalidConfig
from .boosting import sigmoid


def _init_weights(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=(fan_in, fan_out))


class Mlp:
    """One hidden ReLU layer, sigmoid output, binary cross-entropy loss."""

    def __init__(self, w1, b1, w2, b2):
        self.w1 = np.asarray(w1, dtype=np.float64)
        self.b1 = np.asarray(b1, dtype=np.float64)
        self.w2 = np.asarray(w2, dtype=np.float64)
        self.b2 = np.asarray(b2, dtype=np.float64)

    @classmethod
    def initialize(cls, n_features: int, hidden_units: int, seed: int) -> "Mlp":
        rng = np.random.default_rng(seed)
        w1 = _init_weights(rng, n_features, hidden_units)
        w2 = _init_weights(rng, hidden_units, 1)
        return cls(w1, np.zeros(hidden_units), w2, np.zeros(1))

    def _forward(self, X):
        z1 = X @ self.w1 + self.b1
        h = np.maximum(z1, 0.0)
        z2 = h @ self.w2 + self.b2
        p = sigmoid(z2[:, 0])
        return z1, h, p

    def predict_matrix(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != self.w1.shape[0]:
            raise DimensionMismatch(
                f"expected {self.w1.shape[0]} features, got {X.shape[1]}"
            )
        return self._forward(X)[2]

    def predict_one(self, x) -> float:
        return float(self.predict_matrix(np.asarray(x, dtype=np.float64).reshape(1, -1))[0])

    def loss(self, X, y) -> float:
        p = np.clip(self._forward(np.asarray(X, dtype=np.float64))[2], 1e-12, 1 - 1e-12)
        y = np.asarray(y, dtype=np.float64)
        return float(-np.mean(y * np.log(p) + (1 - y) * np.log(1 - p)))

    def gradients(self, X, y):
        """Exact full-batch BCE gradients for (w1, b1, w2, b2)."""
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        n = len(y)
        z1, h, p = self._forward(X)
        dz2 = ((p - y) / n)[:, None]          # (n,1)
        gw2 = h.T @ dz2
        gb2 = dz2.sum(axis=0)
        dh = dz2 @ self.w2.T                  # (n,hidden)
        dz1 = dh * (z1 > 0.0)
        gw1 = X.T @ dz1
        gb1 = dz1.sum(axis=0)
        return gw1, gb1, gw2, gb2

    # Parameter packing keeps the finite-difference check generic.
    def get_params(self) -> np.ndarray:
        return np.concatenate(
            [self.w1.ravel(), self.b1.ravel(), self.w2.ravel(), self.b2.ravel()]
        )

    def set_params(self, flat: np.ndarray) -> None:
        flat = np.asarray(flat, dtype=np.float64)
        shapes = [self.w1.shape, self.b1.shape, self.w2.shape, self.b2.shape]
        sizes = [int(np.prod(s)) for s in shapes]
        if flat.size != sum(sizes):
            raise DimensionMismatch("parameter vector has wrong length")
        chunks = np.split(flat, np.cumsum(sizes)[:-1])
        self.w1, self.b1, self.w2, self.b2 = (
            c.reshape(s) for c, s in zip(chunks, shapes)
        )

    def grad_params(self, X, y) -> np.ndarray:
        return np.concatenate([g.ravel() for g in self.gradients(X, y)])

    def to_dict(self) -> dict:
        return {
            "w1": self.w1.tolist(),
            "b1": self.b1.tolist(),
            "w2": self.w2.tolist(),
            "b2": self.b2.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Mlp":
        return cls(data["w1"], data["b1"], data["w2"], data["b2"])


def train_mlp(
    X,
    y,
    hidden_units: int = 16,
    learning_rate: float = 0.5,
    epochs: int = 300,
    seed: int = 0,
) -> Mlp:
    if epochs < 1 or learning_rate <= 0 or hidden_units < 1:
        raise InvalidConfig("MLP needs epochs >= 1, learning_rate > 0, hidden_units >= 1")
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    model = Mlp.initialize(X.shape[1], hidden_units, seed)
    for _ in range(epochs):
        gw1, gb1, gw2, gb2 = model.gradients(X, y)
        model.w1 -= learning_rate * gw1
        model.b1 -= learning_rate * gb1
        model.w2 -= learning_rate * gw2
        model.b2 -= learning_rate * gb2
    return model


class Autoencoder:
    """Bottleneck reconstruction net; anomaly score = mean squared error.

    Hidden activation is tanh by default ("linear" is supported so an
    identity map is learnable); the output layer is always linear.
    """

    def __init__(self, w1, b1, w2, b2, activation: str = "tanh",
                 anomaly_threshold: float = 0.0):
        if activation not in ("tanh", "linear"):
            raise InvalidConfig(f"unsupported activation {activation!r}")
        self.w1 = np.asarray(w1, dtype=np.float64)
        self.b1 = np.asarray(b1, dtype=np.float64)
        self.w2 = np.asarray(w2, dtype=np.float64)
        self.b2 = np.asarray(b2, dtype=np.float64)
        self.activation = activation
        self.anomaly_threshold = float(anomaly_threshold)

    @classmethod
    def initialize(cls, n_features: int, bottleneck: int, seed: int,
                   activation: str = "tanh") -> "Autoencoder":
        rng = np.random.default_rng(seed)
        w1 = _init_weights(rng, n_features, bottleneck)
        w2 = _init_weights(rng, bottleneck, n_features)
        return cls(w1, np.zeros(bottleneck), w2, np.zeros(n_features),
                   activation=activation)

    def _forward(self, X):
        z1 = X @ self.w1 + self.b1
        h = np.tanh(z1) if self.activation == "tanh" else z1
        xhat = h @ self.w2 + self.b2
        return z1, h, xhat

    def reconstruct(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != self.w1.shape[0]:
            raise DimensionMismatch(
                f"expected {self.w1.shape[0]} features, got {X.shape[1]}"
            )
        return self._forward(X)[2]

    def scores_matrix(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        xhat = self.reconstruct(X)
        return np.mean((xhat - X) ** 2, axis=1)

    def anomaly_score(self, x) -> float:
        return float(self.scores_matrix(np.asarray(x, dtype=np.float64).reshape(1, -1))[0])

    def is_anomalous(self, x) -> bool:
        return self.anomaly_score(x) > self.anomaly_threshold

    def loss(self, X) -> float:
        X = np.asarray(X, dtype=np.float64)
        xhat = self._forward(X)[2]
        return float(np.mean((xhat - X) ** 2))

    def gradients(self, X):
        """Exact gradients of mean squared reconstruction error."""
        X = np.asarray(X, dtype=np.float64)
        n, d = X.shape
        z1, h, xhat = self._forward(X)
        dxhat = 2.0 * (xhat - X) / (n * d)
        gw2 = h.T @ dxhat
        gb2 = dxhat.sum(axis=0)
        dh = dxhat @ self.w2.T
        dz1 = dh * (1.0 - h * h) if self.activation == "tanh" else dh
        gw1 = X.T @ dz1
        gb1 = dz1.sum(axis=0)
        return gw1, gb1, gw2, gb2

    def get_params(self) -> np.ndarray:
        return np.concatenate(
            [self.w1.ravel(), self.b1.ravel(), self.w2.ravel(), self.b2.ravel()]
        )

    def set_params(self, flat: np.ndarray) -> None:
        flat = np.asarray(flat, dtype=np.float64)
        shapes = [self.w1.shape, self.b1.shape, self.w2.shape, self.b2.shape]
        sizes = [int(np.prod(s)) for s in shapes]
        if flat.size != sum(sizes):
            raise DimensionMismatch("parameter vector has wrong length")
        chunks = np.split(flat, np.cumsum(sizes)[:-1])
        self.w1, self.b1, self.w2, self.b2 = (
            c.reshape(s) for c, s in zip(chunks, shapes)
        )

    def grad_params(self, X) -> np.ndarray:
        return np.concatenate([g.ravel() for g in self.gradients(X)])

    def to_dict(self) -> dict:
        return {
            "w1": self.w1.tolist(),
            "b1": self.b1.tolist(),
            "w2": self.w2.tolist(),
            "b2": self.b2.tolist(),
            "activation": self.activation,
            "anomaly_threshold": self.anomaly_threshold,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Autoencoder":
        return cls(
            data["w1"], data["b1"], data["w2"], data["b2"],
            activation=data["activation"],
            anomaly_threshold=data["anomaly_threshold"],
        )


def train_autoencoder(
    legit_X,
    bottleneck: int = 4,
    learning_rate: float = 0.1,
    epochs: int = 200,
    seed: int = 0,
    threshold_percentile: float = 95.0,
    activation: str = "tanh",
) -> Autoencoder:
    """Train on legitimate rows only; threshold from their score percentile."""
    X = np.asarray(legit_X, dtype=np.float64)
    if len(X) == 0:
        raise InvalidConfig("autoencoder needs at least one legitimate row")
    if bottleneck < 1 or epochs < 1 or learning_rate <= 0:
        raise InvalidConfig("autoencoder needs bottleneck >= 1, epochs >= 1, lr > 0")
    if not (0.0 < threshold_percentile <= 100.0):
        raise InvalidConfig("threshold_percentile must be in (0, 100]")

    model = Autoencoder.initialize(X.shape[1], bottleneck, seed, activation)
    for _ in range(epochs):
        gw1, gb1, gw2, gb2 = model.gradients(X)
        model.w1 -= learning_rate * gw1
        model.b1 -= learning_rate * gb1
        model.w2 -= learning_rate * gw2
        model.b2 -= learning_rate * gb2
    model.anomaly_threshold = float(
        np.percentile(model.scores_matrix(X), threshold_percentile)
    )
    return model
