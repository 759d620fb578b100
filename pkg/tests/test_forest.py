import numpy as np
import pytest

from websentinel.errors import InvalidConfig
from websentinel.models.forest import RandomForest, train_forest
from websentinel.models.trees import DecisionTree


def make_data(seed=0, n=80, d=5):
    rng = np.random.default_rng(seed)
    X = rng.random((n, d))
    y = (X[:, 0] + X[:, 2] > 1.0).astype(float)
    return X, y


class TestRandomForest:
    def test_degenerate_forest_equals_single_tree(self):
        X, y = make_data()
        forest = train_forest(
            X, y, n_trees=1, seed=3, bootstrap=False,
            max_depth=4, min_samples_leaf=1, subset_size=X.shape[1],
        )
        solo = DecisionTree(max_depth=4, min_samples_leaf=1).fit(X, y)
        probe = np.random.default_rng(9).random((30, X.shape[1]))
        np.testing.assert_array_equal(
            forest.predict_matrix(probe), solo.predict_matrix(probe)
        )

    def test_prediction_is_exact_mean_of_trees(self):
        X, y = make_data(seed=1)
        forest = train_forest(X, y, n_trees=7, seed=5)
        probe = np.random.default_rng(2).random((25, X.shape[1]))
        manual = sum(t.predict_matrix(probe) for t in forest.trees) / len(forest.trees)
        assert np.max(np.abs(forest.predict_matrix(probe) - manual)) < 1e-12
        for row in probe:
            member_mean = sum(t.predict_one(row) for t in forest.trees) / len(forest.trees)
            assert abs(forest.predict_one(row) - member_mean) < 1e-12

    def test_tree_order_permutation_invariant(self):
        X, y = make_data(seed=2)
        forest = train_forest(X, y, n_trees=5, seed=7)
        shuffled = RandomForest(
            trees=list(reversed(forest.trees)),
            feature_subsets=list(reversed(forest.feature_subsets)),
            n_trees=forest.n_trees, bootstrap=forest.bootstrap, seed=forest.seed,
        )
        probe = np.random.default_rng(4).random((10, X.shape[1]))
        np.testing.assert_allclose(
            forest.predict_matrix(probe), shuffled.predict_matrix(probe), atol=1e-15
        )

    def test_three_member_mean(self):
        # Trees returning 0.0 / 0.5 / 1.0 average to exactly 0.5.
        X = np.array([[0.0], [1.0]])
        leaf = lambda value: {"fraud_fraction": value, "sample_count": 1}
        trees = []
        for value in (0.0, 0.5, 1.0):
            t = DecisionTree(max_depth=1)
            t.n_features = 1
            t.nodes = [leaf(value)]
            trees.append(t)
        forest = RandomForest(trees, [[0]] * 3, n_trees=3, bootstrap=False, seed=0)
        assert forest.predict_one([0.3]) == 0.5

    def test_subset_size_default_sqrt(self):
        X, y = make_data(seed=3, d=9)
        forest = train_forest(X, y, n_trees=4, seed=1)
        assert all(len(s) == 3 for s in forest.feature_subsets)  # ceil(sqrt(9))

    def test_deterministic(self):
        X, y = make_data(seed=4)
        a = train_forest(X, y, n_trees=6, seed=11)
        b = train_forest(X, y, n_trees=6, seed=11)
        probe = np.random.default_rng(5).random((10, X.shape[1]))
        np.testing.assert_array_equal(a.predict_matrix(probe), b.predict_matrix(probe))
        assert a.feature_subsets == b.feature_subsets

    def test_invalid_n_trees(self):
        X, y = make_data()
        with pytest.raises(InvalidConfig):
            train_forest(X, y, n_trees=0, seed=1)

    def test_serialization_roundtrip(self):
        X, y = make_data(seed=6)
        forest = train_forest(X, y, n_trees=3, seed=2)
        clone = RandomForest.from_dict(forest.to_dict())
        probe = np.random.default_rng(7).random((12, X.shape[1]))
        np.testing.assert_array_equal(
            forest.predict_matrix(probe), clone.predict_matrix(probe)
        )
