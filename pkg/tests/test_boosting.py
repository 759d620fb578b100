import numpy as np
import pytest

from websentinel.errors import InvalidConfig
from websentinel.models.boosting import (
    GradientBoosting,
    log_loss,
    sigmoid,
    train_gbm,
)


def make_data(seed=0, n=120):
    rng = np.random.default_rng(seed)
    X = rng.random((n, 4))
    y = ((X[:, 0] > 0.5) & (X[:, 1] < 0.7)).astype(float)
    return X, y


class TestSigmoid:
    def test_center(self):
        assert sigmoid(0.0) == 0.5

    def test_extremes_stable(self):
        assert sigmoid(800.0) == 1.0
        assert sigmoid(-800.0) == 0.0

    def test_array(self):
        out = sigmoid(np.array([-1.0, 0.0, 1.0]))
        assert out[1] == 0.5
        assert out[0] + out[2] == pytest.approx(1.0)


class TestTrainGbm:
    def test_zero_rounds_predicts_base_rate(self):
        X, y = make_data()
        model = train_gbm(X, y, n_rounds=0)
        expected = float(np.mean(y))
        assert model.predict_one(X[0]) == pytest.approx(expected)
        assert model.predict_one(np.zeros(4)) == pytest.approx(expected)

    def test_zero_learning_rate_equals_zero_rounds(self):
        X, y = make_data(seed=1)
        frozen = train_gbm(X, y, n_rounds=10, learning_rate=0.0)
        prior = train_gbm(X, y, n_rounds=0)
        probe = np.random.default_rng(2).random((15, 4))
        np.testing.assert_allclose(
            frozen.predict_matrix(probe), prior.predict_matrix(probe), atol=1e-15
        )

    def test_log_loss_non_increasing(self):
        X, y = make_data(seed=3)
        trace = []
        train_gbm(X, y, n_rounds=50, learning_rate=0.1, max_depth=3,
                  loss_trace=trace)
        assert len(trace) == 51
        diffs = np.diff(trace)
        assert np.all(diffs <= 1e-9)

    def test_improves_over_prior(self):
        X, y = make_data(seed=4)
        model = train_gbm(X, y, n_rounds=30, learning_rate=0.1)
        p = model.predict_matrix(X)
        assert log_loss(y, p) < log_loss(y, np.full(len(y), np.mean(y)))

    def test_single_class_clamps_base_rate(self):
        X = np.random.default_rng(5).random((20, 3))
        y = np.ones(20)
        model = train_gbm(X, y, n_rounds=2)
        assert np.isfinite(model.base_log_odds)
        assert model.predict_one(X[0]) > 0.99

    def test_invalid_params(self):
        X, y = make_data()
        with pytest.raises(InvalidConfig):
            train_gbm(X, y, n_rounds=-1)
        with pytest.raises(InvalidConfig):
            train_gbm(X, y, learning_rate=-0.5)

    def test_probability_in_open_interval(self):
        X, y = make_data(seed=6)
        model = train_gbm(X, y, n_rounds=20)
        p = model.predict_matrix(X)
        assert np.all(p > 0.0) and np.all(p < 1.0)

    def test_serialization_roundtrip(self):
        X, y = make_data(seed=7)
        model = train_gbm(X, y, n_rounds=15)
        clone = GradientBoosting.from_dict(model.to_dict())
        probe = np.random.default_rng(8).random((10, 4))
        np.testing.assert_array_equal(
            model.predict_matrix(probe), clone.predict_matrix(probe)
        )

    def test_deterministic(self):
        X, y = make_data(seed=9)
        a = train_gbm(X, y, n_rounds=10)
        b = train_gbm(X, y, n_rounds=10)
        probe = np.random.default_rng(1).random((10, 4))
        np.testing.assert_array_equal(a.predict_matrix(probe), b.predict_matrix(probe))
