"""Independent oracles shared by unit and acceptance tests.

These deliberately re-derive results by exhaustive enumeration instead of
calling back into the library's search code, so they can catch bugs in
the optimized paths.
"""

from __future__ import annotations

import numpy as np


def brute_force_best_split(X, y, min_samples_leaf: int = 1):
    """Enumerate every (feature, midpoint) pair and pick the best Gini gain.

    Ties break toward the lowest feature index then the lowest threshold,
    matching the documented split-selection contract. Returns
    (feature, threshold, gain) or None when no valid candidate exists.
    """
    X = np.asarray(X, dtype=float)
    y = [int(v) for v in y]
    n, d = X.shape

    def gini(labels):
        m = len(labels)
        pos = sum(labels)
        p0 = (m - pos) / m
        p1 = pos / m
        return 1.0 - (p0 * p0 + p1 * p1)

    parent = gini(y)
    best = None
    for j in range(d):
        values = sorted(set(X[:, j].tolist()))
        for a, b in zip(values, values[1:]):
            threshold = (a + b) / 2.0
            left = [y[i] for i in range(n) if X[i, j] <= threshold]
            right = [y[i] for i in range(n) if X[i, j] > threshold]
            nl, nr = len(left), len(right)
            if nl < min_samples_leaf or nr < min_samples_leaf:
                continue
            gain = parent - ((nl / n) * gini(left) + (nr / n) * gini(right))
            if best is None or gain > best[2]:
                best = (j, threshold, gain)
    return best


def finite_difference_gradient(model, loss_fn, eps=1e-5):
    """Central differences over every packed parameter of a neural model."""
    theta = model.get_params()
    numeric = np.empty_like(theta)
    for i in range(len(theta)):
        up = theta.copy()
        up[i] += eps
        model.set_params(up)
        loss_up = loss_fn()
        down = theta.copy()
        down[i] -= eps
        model.set_params(down)
        loss_down = loss_fn()
        numeric[i] = (loss_up - loss_down) / (2 * eps)
    model.set_params(theta)
    return numeric


def max_relative_error(analytic, numeric):
    return float(
        np.max(np.abs(analytic - numeric) / (np.abs(analytic) + np.abs(numeric) + 1e-8))
    )


def minority_bounding_box(minority_rows):
    M = np.asarray(minority_rows, dtype=float)
    return M.min(axis=0), M.max(axis=0)


def knn_by_enumeration(points, index: int, k: int):
    """k nearest neighbor indices of points[index], brute force, ties by index."""
    P = np.asarray(points, dtype=float)
    dists = []
    for j in range(len(P)):
        if j == index:
            continue
        dists.append((float(np.sqrt(np.sum((P[index] - P[j]) ** 2))), j))
    dists.sort()
    return [j for _, j in dists[:k]]
