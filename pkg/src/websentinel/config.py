"""Engine configuration: embedded defaults plus optional TOML overrides.

The config file is a versioned TOML document; every key shown in
``DEFAULTS`` can be overridden, unknown keys are rejected so typos fail
loudly. ``SENTINEL_CONFIG`` in the environment overrides the path passed
on the command line.
"""

from __future__ import annotations

import copy
import os
import sys
from dataclasses import dataclass, field
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import InvalidConfig
from .manifest import FEATURE_NAMES

CONFIG_FORMAT_VERSION = 1

CONFIG_ENV_VAR = "SENTINEL_CONFIG"

DEFAULTS: dict[str, Any] = {
    "config_version": CONFIG_FORMAT_VERSION,
    "features": {
        # Domain younger than this many days counts as "young".
        "young_domain_days": 180,
        "suspicious_tlds": [
            "tk", "ml", "ga", "cf", "gq", "zip", "mov",
            "xyz", "top", "click", "loan", "icu", "buzz",
        ],
        "sensitive_input_keywords": ["ssn", "card", "cvv"],
    },
    "obfuscation": {
        "weight_eval": 0.35,
        "weight_escape_density": 0.25,
        "weight_concat_density": 0.20,
        "weight_entropy": 0.20,
        "entropy_threshold_bits": 4.0,
    },
    "session": {
        "rapid_redirect_ms": 500,
        "hidden_redirect_lookback_ms": 2000,
    },
    "models": {
        "tree": {"max_depth": 8, "min_samples_leaf": 5},
        "forest": {"n_trees": 15, "max_depth": 8, "min_samples_leaf": 2, "bootstrap": True},
        "gbm": {"n_rounds": 50, "learning_rate": 0.1, "max_depth": 3},
        "svm": {"lam": 0.1, "epochs": 30},
        "mlp": {"hidden_units": 16, "learning_rate": 0.5, "epochs": 300},
        "autoencoder": {
            "bottleneck": 4,
            "learning_rate": 0.1,
            "epochs": 200,
            "threshold_percentile": 95.0,
        },
    },
    "scoring": {
        # One weight per probability model; must sum to 1.
        "weights": {"tree": 0.2, "forest": 0.2, "gbm": 0.2, "svm": 0.2, "mlp": 0.2},
        "caution_threshold": 30.0,
        "danger_threshold": 70.0,
        "anomaly_floor": 75.0,
        "explanation_top_n": 5,
    },
    "store": {
        "path": "reputation.jsonl",
        "ttl_seconds": 86400,
        "seed_list": "",
    },
}


def _merge(base: dict, override: dict, path: str = "") -> dict:
    """Recursively merge override into base, rejecting unknown keys."""
    out = copy.deepcopy(base)
    for key, value in override.items():
        where = f"{path}.{key}" if path else key
        if key not in base:
            raise InvalidConfig(f"unknown config key: {where}")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise InvalidConfig(f"config key {where} must be a section")
            out[key] = _merge(base[key], value, where)
        else:
            out[key] = value
    return out


@dataclass
class EngineConfig:
    """Validated engine settings. ``raw`` keeps the merged tree for lookups."""

    raw: dict[str, Any] = field(default_factory=lambda: copy.deepcopy(DEFAULTS))

    def __post_init__(self):
        self.validate()

    # Section accessors keep call sites short.
    @property
    def features(self) -> dict:
        return self.raw["features"]

    @property
    def obfuscation(self) -> dict:
        return self.raw["obfuscation"]

    @property
    def session(self) -> dict:
        return self.raw["session"]

    @property
    def models(self) -> dict:
        return self.raw["models"]

    @property
    def scoring(self) -> dict:
        return self.raw["scoring"]

    @property
    def store(self) -> dict:
        return self.raw["store"]

    @property
    def feature_names(self) -> list[str]:
        return list(FEATURE_NAMES)

    def aggregation_weights(self) -> dict[str, float]:
        return dict(self.scoring["weights"])

    def validate(self) -> None:
        if self.raw.get("config_version") != CONFIG_FORMAT_VERSION:
            raise InvalidConfig(
                f"unsupported config_version {self.raw.get('config_version')!r}"
            )
        weights = self.scoring["weights"]
        expected = {"tree", "forest", "gbm", "svm", "mlp"}
        if set(weights) != expected:
            raise InvalidConfig(f"scoring.weights must have keys {sorted(expected)}")
        if any(w < 0 for w in weights.values()):
            raise InvalidConfig("scoring.weights must be non-negative")
        total = sum(weights.values())
        if abs(total - 1.0) > 1e-9:
            raise InvalidConfig(f"scoring.weights must sum to 1 (got {total})")
        caution = self.scoring["caution_threshold"]
        danger = self.scoring["danger_threshold"]
        if not (0 <= caution < danger <= 100):
            raise InvalidConfig("need 0 <= caution_threshold < danger_threshold <= 100")
        if self.store["ttl_seconds"] <= 0:
            raise InvalidConfig("store.ttl_seconds must be positive")
        if self.features["young_domain_days"] <= 0:
            raise InvalidConfig("features.young_domain_days must be positive")


def load_config(path: str | None = None) -> EngineConfig:
    """Load config from ``path`` (or $SENTINEL_CONFIG), defaults when absent."""
    env_path = os.environ.get(CONFIG_ENV_VAR)
    if env_path:
        path = env_path
    if path is None:
        return EngineConfig()
    try:
        with open(path, "rb") as fh:
            overrides = tomllib.load(fh)
    except FileNotFoundError:
        raise InvalidConfig(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise InvalidConfig(f"config file {path}: {exc}")
    merged = _merge(DEFAULTS, overrides)
    return EngineConfig(raw=merged)
