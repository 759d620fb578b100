"""The six-model scoring ensemble and its serialization."""

from .trees import DecisionTree, RegressionTree, best_split
from .forest import RandomForest, train_forest
from .boosting import GradientBoosting, train_gbm
from .linear import LinearSvm, train_svm
from .neural import Autoencoder, Mlp, train_autoencoder, train_mlp
from .ensemble import (
    BUNDLE_FORMAT_VERSION,
    Ensemble,
    ModelOutputs,
    load_bundle,
    save_bundle,
    train_ensemble,
)

__all__ = [
    "DecisionTree",
    "RegressionTree",
    "best_split",
    "RandomForest",
    "train_forest",
    "GradientBoosting",
    "train_gbm",
    "LinearSvm",
    "train_svm",
    "Mlp",
    "Autoencoder",
    "train_mlp",
    "train_autoencoder",
    "Ensemble",
    "ModelOutputs",
    "BUNDLE_FORMAT_VERSION",
    "train_ensemble",
    "save_bundle",
    "load_bundle",
]
