"""Train the full six-model ensemble, inspect per-model behavior, save it.

Run: python demos/03_train_and_evaluate_ensemble.py
"""

import os
import tempfile
import time

from websentinel import dataset as D
from websentinel import scoring
from websentinel.config import EngineConfig
from websentinel.metrics import classification_metrics
from websentinel.models.ensemble import load_bundle, save_bundle, train_ensemble

cfg = EngineConfig()
ds = D.generate_synthetic(2000, 0.1, seed=42)
train, test = D.stratified_split(ds, 0.25, seed=42)

started = time.perf_counter()
ensemble = train_ensemble(train, cfg.models, seed=42,
                          weights=cfg.aggregation_weights())
print(f"trained decision tree, random forest, GBM, linear SVM, MLP and "
      f"autoencoder in {time.perf_counter() - started:.1f}s")

# Per-model held-out quality (each model alone, threshold 0.5):
outputs = ensemble.predict_matrix(test.X)
print("\nper-model held-out accuracy:")
for name in ("tree", "forest", "gbm", "svm", "mlp"):
    pred = (outputs[name] >= 0.5).astype(int)
    m = classification_metrics(test.y, pred)
    print(f"  {name:7s} acc={m['accuracy']:.3f}  recall={m['recall']:.3f}")
print(f"  anomaly flag rate: fraud={outputs['anomaly_flag'][test.y == 1].mean():.2f}  "
      f"legit={outputs['anomaly_flag'][test.y == 0].mean():.2f}")

# Aggregated 0-100 risk score with the anomaly floor:
scores = scoring.batch_scores(ensemble, test.X)
pred = (scores >= 50).astype(int)
m = classification_metrics(test.y, pred)
print(f"\nensemble: acc={m['accuracy']:.3f}  precision={m['precision']:.3f}  "
      f"recall={m['recall']:.3f}  f1={m['f1']:.3f}")

# Single-vector scoring with explanation:
x = test.X[int(test.y.argmax())]  # some fraud row
assessment = scoring.assess(ensemble, x)
print(f"\none fraud row -> score={assessment.score:.1f} verdict={assessment.verdict.value}")
print("top contributing features (median-substitution deltas):")
for name, delta in assessment.explanation[:3]:
    print(f"  {name:28s} {delta:+.2f}")

# Bundles round-trip to bit-identical predictions:
with tempfile.TemporaryDirectory() as tmp:
    path = os.path.join(tmp, "bundle.json")
    save_bundle(ensemble, path)
    clone = load_bundle(path)
    same = scoring.batch_scores(clone, test.X)
    print(f"\nbundle file: {os.path.getsize(path) // 1024} KB, "
          f"max prediction drift after reload = {abs(same - scores).max():.1e}")
