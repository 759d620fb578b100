"""Generate labeled data, then compare rebalancing strategies on the GBM.

Reproduces the classic imbalance trade-off: undersampling buys recall at
the cost of precision, SMOTE keeps a more balanced F1.

Run: python demos/02_synthetic_data_and_resampling.py
"""

import numpy as np

from websentinel import dataset as D
from websentinel.metrics import classification_metrics
from websentinel.models.boosting import train_gbm

ds = D.generate_synthetic(n=2000, fraud_ratio=0.1, separation=1.0, seed=42)
print(f"dataset: {len(ds)} rows, class counts (legit, fraud) = {ds.class_counts()}")

train, test = D.stratified_split(ds, test_fraction=0.25, seed=42)
print(f"split:   train={train.class_counts()}  test={test.class_counts()}")


def evaluate(train_ds, label):
    norm = D.fit_normalizer(train_ds)
    model = train_gbm(norm.apply_matrix(train_ds.X), train_ds.y.astype(float))
    pred = (model.predict_matrix(norm.apply_matrix(test.X)) >= 0.5).astype(int)
    m = classification_metrics(test.y, pred)
    print(f"  {label:12s} acc={m['accuracy']:.3f}  precision={m['precision']:.3f}  "
          f"recall={m['recall']:.3f}  f1={m['f1']:.3f}")
    return m


print("\nGBM under three training regimes (same held-out test set):")
evaluate(train, "baseline")

under = D.random_undersample(train, seed=42)
print(f"\nundersampled train counts: {under.class_counts()}")
evaluate(under, "undersample")

smoted = D.smote(train, k=5, seed=42)
print(f"\nSMOTE train counts: {smoted.class_counts()}")
evaluate(smoted, "smote")

# SMOTE's synthetic rows interpolate between minority neighbors, so they
# stay inside the minority bounding box:
minority = train.X[train.y == 1]
synthetic = smoted.X[len(train):]
inside = np.all(
    (synthetic >= minority.min(axis=0) - 1e-9)
    & (synthetic <= minority.max(axis=0) + 1e-9)
)
print(f"\nall {len(synthetic)} synthetic rows inside minority bounding box: {inside}")
