"""The trained six-model ensemble plus its versioned JSON bundle format.

The bundle is self-describing text: it embeds the feature manifest, the
normalizer, per-feature training medians (used for explanations) and the
training seed, so a bundle alone reproduces every prediction bit-for-bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..dataset import LabeledDataset, Normalizer, fit_normalizer
from ..errors import DimensionMismatch, InvalidConfig
from .boosting import GradientBoosting, train_gbm
from .forest import RandomForest, train_forest
from .linear import LinearSvm, train_svm
from .neural import Autoencoder, Mlp, train_autoencoder, train_mlp
from .trees import DecisionTree

BUNDLE_FORMAT_VERSION = 1

PROBABILITY_MODELS = ("tree", "forest", "gbm", "svm", "mlp")


@dataclass(frozen=True)
class ModelOutputs:
    tree: float
    forest: float
    gbm: float
    svm: float
    mlp: float
    anomaly_score: float
    anomaly_flag: bool

    def probabilities(self) -> dict[str, float]:
        return {
            "tree": self.tree,
            "forest": self.forest,
            "gbm": self.gbm,
            "svm": self.svm,
            "mlp": self.mlp,
        }

    def to_dict(self) -> dict:
        out = self.probabilities()
        out["anomaly_score"] = self.anomaly_score
        out["anomaly_flag"] = self.anomaly_flag
        return out


class Ensemble:
    """Immutable after training; prediction calls are counted for the
    cache-conformance checks but never change outputs."""

    def __init__(
        self,
        tree: DecisionTree,
        forest: RandomForest,
        gbm: GradientBoosting,
        svm: LinearSvm,
        mlp: Mlp,
        autoencoder: Autoencoder,
        normalizer: Normalizer,
        weights: dict[str, float],
        manifest: list[str],
        medians: np.ndarray,
        training_seed: int,
        format_version: int = BUNDLE_FORMAT_VERSION,
    ):
        self.tree = tree
        self.forest = forest
        self.gbm = gbm
        self.svm = svm
        self.mlp = mlp
        self.autoencoder = autoencoder
        self.normalizer = normalizer
        self.weights = dict(weights)
        self.manifest = list(manifest)
        self.medians = np.asarray(medians, dtype=np.float64)
        self.training_seed = training_seed
        self.format_version = format_version
        self.eval_count = 0
        self._validate()

    def _validate(self):
        if set(self.weights) != set(PROBABILITY_MODELS):
            raise InvalidConfig(f"weights must cover {PROBABILITY_MODELS}")
        if any(w < 0 for w in self.weights.values()):
            raise InvalidConfig("aggregation weights must be non-negative")
        if abs(sum(self.weights.values()) - 1.0) > 1e-9:
            raise InvalidConfig("aggregation weights must sum to 1")
        if len(self.medians) != len(self.manifest):
            raise InvalidConfig("medians length != manifest length")

    def predict(self, x) -> ModelOutputs:
        """All six model outputs for one raw-scale feature vector.

        Evaluation is staged cheapest-first (tree and forest give the quick
        initial assessment, then GBM and MLP, then SVM and the anomaly
        check) but every output is always computed.
        """
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (len(self.manifest),):
            raise DimensionMismatch(
                f"expected {len(self.manifest)} features, got {x.shape}"
            )
        self.eval_count += 1
        z = self.normalizer.apply(x)
        tree_p = self.tree.predict_one(z)
        forest_p = self.forest.predict_one(z)
        gbm_p = self.gbm.predict_one(z)
        mlp_p = self.mlp.predict_one(z)
        svm_p = self.svm.predict_one(z)
        anomaly = self.autoencoder.anomaly_score(z)
        return ModelOutputs(
            tree=tree_p,
            forest=forest_p,
            gbm=gbm_p,
            svm=svm_p,
            mlp=mlp_p,
            anomaly_score=anomaly,
            anomaly_flag=anomaly > self.autoencoder.anomaly_threshold,
        )

    def predict_matrix(self, X) -> dict[str, np.ndarray]:
        """Batch variant used by eval; same outputs as predict per row."""
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != len(self.manifest):
            raise DimensionMismatch(
                f"expected {len(self.manifest)} features, got {X.shape[1]}"
            )
        self.eval_count += len(X)
        Z = self.normalizer.apply_matrix(X)
        scores = self.autoencoder.scores_matrix(Z)
        return {
            "tree": self.tree.predict_matrix(Z),
            "forest": self.forest.predict_matrix(Z),
            "gbm": self.gbm.predict_matrix(Z),
            "svm": self.svm.predict_matrix(Z),
            "mlp": self.mlp.predict_matrix(Z),
            "anomaly_score": scores,
            "anomaly_flag": scores > self.autoencoder.anomaly_threshold,
        }

    def to_dict(self) -> dict:
        return {
            "format_version": self.format_version,
            "manifest": self.manifest,
            "normalizer": self.normalizer.to_dict(),
            "tree": self.tree.to_dict(),
            "forest": self.forest.to_dict(),
            "gbm": self.gbm.to_dict(),
            "svm": self.svm.to_dict(),
            "mlp": self.mlp.to_dict(),
            "autoencoder": self.autoencoder.to_dict(),
            "weights": self.weights,
            "medians": self.medians.tolist(),
            "training_seed": self.training_seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Ensemble":
        version = data.get("format_version")
        if version != BUNDLE_FORMAT_VERSION:
            raise InvalidConfig(f"unsupported bundle format_version {version!r}")
        return cls(
            tree=DecisionTree.from_dict(data["tree"]),
            forest=RandomForest.from_dict(data["forest"]),
            gbm=GradientBoosting.from_dict(data["gbm"]),
            svm=LinearSvm.from_dict(data["svm"]),
            mlp=Mlp.from_dict(data["mlp"]),
            autoencoder=Autoencoder.from_dict(data["autoencoder"]),
            normalizer=Normalizer.from_dict(data["normalizer"]),
            weights=data["weights"],
            manifest=data["manifest"],
            medians=np.array(data["medians"], dtype=np.float64),
            training_seed=data["training_seed"],
            format_version=version,
        )


def train_ensemble(ds: LabeledDataset, config: dict, seed: int,
                   weights: dict[str, float] | None = None) -> Ensemble:
    """Fit the normalizer and all six models on one raw-scale dataset.

    config is the ``models`` section of the engine config. Sub-seeds are
    fixed offsets of ``seed`` so the whole run is reproducible from one
    integer.
    """
    if len(ds) == 0:
        raise InvalidConfig("cannot train on an empty dataset")
    norm = fit_normalizer(ds)
    Z = norm.apply_matrix(ds.X)
    y = ds.y.astype(np.float64)

    tree_cfg = config["tree"]
    tree = DecisionTree(tree_cfg["max_depth"], tree_cfg["min_samples_leaf"]).fit(Z, y)

    f_cfg = config["forest"]
    forest = train_forest(
        Z, y,
        n_trees=f_cfg["n_trees"],
        seed=seed,
        bootstrap=f_cfg["bootstrap"],
        max_depth=f_cfg["max_depth"],
        min_samples_leaf=f_cfg["min_samples_leaf"],
    )

    g_cfg = config["gbm"]
    gbm = train_gbm(
        Z, y,
        n_rounds=g_cfg["n_rounds"],
        learning_rate=g_cfg["learning_rate"],
        max_depth=g_cfg["max_depth"],
    )

    s_cfg = config["svm"]
    svm = train_svm(Z, y, lam=s_cfg["lam"], epochs=s_cfg["epochs"], seed=seed + 1)

    m_cfg = config["mlp"]
    mlp = train_mlp(
        Z, y,
        hidden_units=m_cfg["hidden_units"],
        learning_rate=m_cfg["learning_rate"],
        epochs=m_cfg["epochs"],
        seed=seed + 2,
    )

    a_cfg = config["autoencoder"]
    autoencoder = train_autoencoder(
        Z[ds.y == 0],
        bottleneck=a_cfg["bottleneck"],
        learning_rate=a_cfg["learning_rate"],
        epochs=a_cfg["epochs"],
        seed=seed + 3,
        threshold_percentile=a_cfg["threshold_percentile"],
    )

    if weights is None:
        weights = {name: 0.2 for name in PROBABILITY_MODELS}

    return Ensemble(
        tree=tree,
        forest=forest,
        gbm=gbm,
        svm=svm,
        mlp=mlp,
        autoencoder=autoencoder,
        normalizer=norm,
        weights=weights,
        manifest=list(ds.feature_names),
        medians=np.median(ds.X, axis=0),
        training_seed=seed,
    )


def save_bundle(ensemble: Ensemble, path: str) -> None:
    """Stable, diffable JSON: fixed key order, newline-terminated."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(ensemble.to_dict(), fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_bundle(path: str) -> Ensemble:
    with open(path, "r", encoding="utf-8") as fh:
        return Ensemble.from_dict(json.load(fh))
