"""Labeled feature datasets: synthesis, CSV I/O, splitting, rebalancing.

The synthetic generator substitutes for a real labeled corpus. Legitimate
rows are drawn from per-feature distributions modeling established sites
(old domains, valid certificates, low obfuscation); fraudulent rows from
distributions shifted toward risk (young domains, external form targets,
rapid redirects). The shift is linear in ``separation``: every fraud
parameter is legit_param + separation * (shifted_param - legit_param).
A small "stealthy" fraction of fraud rows (and a "weird but benign"
fraction of legit rows) is drawn at reduced shift, so the classes overlap
and classifier trade-offs stay visible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import InvalidConfig, ParseError, SchemaError
from .manifest import FEATURE_INDEX, FEATURE_NAMES, N_FEATURES

LEGIT, FRAUD = 0, 1

STEALTHY_FRAUD_FRACTION = 0.15   # fraud rows drawn at 35% of the shift
STEALTHY_FRAUD_SHIFT = 0.35
ODD_LEGIT_FRACTION = 0.07        # legit rows drawn at 30% of the shift
ODD_LEGIT_SHIFT = 0.30


@dataclass
class LabeledDataset:
    feature_names: list[str]
    X: np.ndarray  # (n, d) float64
    y: np.ndarray  # (n,) int, 0=legit 1=fraud
    provenance: Literal["synthetic", "csv"]

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=np.int64)
        if self.X.ndim != 2 or self.X.shape[1] != len(self.feature_names):
            raise InvalidConfig("feature matrix width != feature_names length")
        if len(self.y) != self.X.shape[0]:
            raise InvalidConfig("label count != row count")
        if len(set(self.feature_names)) != len(self.feature_names):
            raise InvalidConfig("feature names must be unique")
        if not np.all(np.isin(self.y, [LEGIT, FRAUD])):
            raise InvalidConfig("labels must be 0 or 1")

    def __len__(self) -> int:
        return self.X.shape[0]

    @property
    def rows(self):
        return list(zip(self.X.tolist(), self.y.tolist()))

    def class_counts(self) -> tuple[int, int]:
        return int(np.sum(self.y == LEGIT)), int(np.sum(self.y == FRAUD))

    def subset(self, indices) -> "LabeledDataset":
        idx = np.asarray(indices, dtype=np.int64)
        return LabeledDataset(
            feature_names=list(self.feature_names),
            X=self.X[idx].copy(),
            y=self.y[idx].copy(),
            provenance=self.provenance,
        )


# --- synthetic generator -------------------------------------------------
# Per-feature samplers: (kind, legit params, fully-shifted fraud params).
# Parameters interpolate linearly with the per-row shift s in [0, ~1].

_GEN_SPEC = [
    ("url_length", "normal", (45.0, 12.0), (78.0, 24.0)),
    ("host_length", "normal", (16.0, 4.0), (25.0, 7.0)),
    ("digit_ratio", "beta", (1.2, 18.0), (2.6, 8.0)),
    ("char_entropy", "normal", (4.0, 0.25), (4.6, 0.35)),
    ("subdomain_count", "choice4", (0.55, 0.40, 0.04, 0.01), (0.15, 0.30, 0.35, 0.20)),
    ("has_at_symbol", "bernoulli", (0.01,), (0.08,)),
    ("has_punycode", "bernoulli", (0.005,), (0.06,)),
    ("hyphen_count", "poisson", (0.2,), (1.3,)),
    ("host_is_ip", "bernoulli", (0.005,), (0.12,)),
    ("suspicious_tld", "bernoulli", (0.02,), (0.35,)),
    ("domain_age_days", "uniform", (400.0, 6000.0), (1.0, 220.0)),
    ("domain_is_young", "derived", (), ()),
    ("cert_valid", "bernoulli", (0.96,), (0.45,)),
    ("cert_days_remaining", "uniform", (20.0, 360.0), (5.0, 120.0)),
    ("metadata_resolved", "bernoulli", (0.95,), (0.72,)),
    ("form_count", "poisson", (1.0,), (1.9,)),
    ("password_input_count", "bernoulli", (0.25,), (0.75,)),
    ("external_form_actions", "bernoulli", (0.02,), (0.55,)),
    ("script_count", "poisson", (8.0,), (11.0,)),
    ("external_script_ratio", "beta", (2.0, 5.0), (5.0, 3.0)),
    ("iframe_count", "poisson", (0.4,), (1.6,)),
    ("hidden_element_count", "poisson", (0.6,), (3.2,)),
    ("meta_refresh_present", "bernoulli", (0.01,), (0.25,)),
    ("meta_refresh_cross_origin", "bernoulli", (0.2,), (0.7,)),
    ("external_link_ratio", "beta", (2.0, 4.0), (5.0, 3.0)),
    ("max_script_obfuscation", "beta", (1.5, 10.0), (6.0, 3.0)),
    ("redirect_chain_length", "poisson", (0.4,), (2.4,)),
    ("cross_origin_hops", "thinned", (0.2,), (0.6,)),
    ("rapid_redirect_count", "thinned", (0.1,), (0.5,)),
    ("third_party_request_ratio", "beta", (2.0, 5.0), (5.0, 3.0)),
    ("unique_third_party_domains", "poisson", (3.0,), (8.0,)),
    ("external_form_submit", "bernoulli", (0.01,), (0.35,)),
    ("sensitive_field_focus_count", "poisson", (0.5,), (2.2,)),
    ("hidden_redirect_flag", "bernoulli", (0.01,), (0.30,)),
]

assert [name for name, *_ in _GEN_SPEC] == FEATURE_NAMES


def _lerp(a, b, s):
    return np.asarray(a) + np.multiply.outer(s, np.subtract(b, a))


def _sample_block(rng: np.random.Generator, n: int, shift: np.ndarray) -> np.ndarray:
    """Draw n rows whose per-row shift toward the fraud profile is given."""
    X = np.zeros((n, N_FEATURES))
    for j, (name, kind, legit_p, fraud_p) in enumerate(_GEN_SPEC):
        if kind == "normal":
            mean = _lerp(legit_p[0], fraud_p[0], shift)
            sd = _lerp(legit_p[1], fraud_p[1], shift)
            X[:, j] = np.maximum(rng.normal(mean, sd), 0.0)
        elif kind == "uniform":
            low = _lerp(legit_p[0], fraud_p[0], shift)
            high = _lerp(legit_p[1], fraud_p[1], shift)
            X[:, j] = rng.uniform(low, high)
        elif kind == "beta":
            a = np.maximum(_lerp(legit_p[0], fraud_p[0], shift), 0.05)
            b = np.maximum(_lerp(legit_p[1], fraud_p[1], shift), 0.05)
            X[:, j] = rng.beta(a, b)
        elif kind == "poisson":
            lam = np.maximum(_lerp(legit_p[0], fraud_p[0], shift), 0.0)
            X[:, j] = rng.poisson(lam)
        elif kind == "bernoulli":
            p = np.clip(_lerp(legit_p[0], fraud_p[0], shift), 0.0, 1.0)
            X[:, j] = (rng.random(n) < p).astype(float)
        elif kind == "choice4":
            probs = np.clip(_lerp(legit_p, fraud_p, shift), 0.0, None)
            probs /= probs.sum(axis=1, keepdims=True)
            cdf = np.cumsum(probs, axis=1)
            u = rng.random(n)
            X[:, j] = (u[:, None] > cdf).sum(axis=1)
        elif kind == "thinned":
            # Filled after redirect_chain_length exists; draw uniforms now to
            # keep the rng stream order fixed.
            X[:, j] = rng.random(n)
        elif kind == "derived":
            pass
        else:  # pragma: no cover
            raise AssertionError(kind)

    # Consistency passes (same invariants the live pipeline guarantees).
    chain = X[:, FEATURE_INDEX["redirect_chain_length"]]
    for name, kind, legit_p, fraud_p in _GEN_SPEC:
        if kind == "thinned":
            j = FEATURE_INDEX[name]
            p = np.clip(_lerp(legit_p[0], fraud_p[0], shift), 0.0, 1.0)
            # Keep a fraction ~p of the redirect chain: q = clip(u + p - 0.5)
            # has mean ~p, and floor(chain * q) never exceeds the chain.
            X[:, j] = np.floor(chain * np.clip(X[:, j] + p - 0.5, 0.0, 1.0))

    X[:, FEATURE_INDEX["domain_is_young"]] = (
        X[:, FEATURE_INDEX["domain_age_days"]] < 180
    ).astype(float)
    X[:, FEATURE_INDEX["external_form_actions"]] = np.minimum(
        X[:, FEATURE_INDEX["external_form_actions"]],
        X[:, FEATURE_INDEX["form_count"]],
    )
    X[:, FEATURE_INDEX["meta_refresh_cross_origin"]] *= X[
        :, FEATURE_INDEX["meta_refresh_present"]
    ]
    unresolved = X[:, FEATURE_INDEX["metadata_resolved"]] == 0.0
    for name in ("domain_age_days", "domain_is_young", "cert_valid", "cert_days_remaining"):
        X[unresolved, FEATURE_INDEX[name]] = 0.0
    return X


def generate_synthetic(
    n: int, fraud_ratio: float, separation: float = 1.0, seed: int = 0
) -> LabeledDataset:
    """Deterministic labeled dataset with exactly round(n*fraud_ratio) fraud rows."""
    if n < 10:
        raise InvalidConfig(f"n must be >= 10 (got {n})")
    if not (0.0 < fraud_ratio < 1.0):
        raise InvalidConfig(f"fraud_ratio must be in (0,1) (got {fraud_ratio})")
    if separation < 0:
        raise InvalidConfig("separation must be >= 0")

    rng = np.random.default_rng(seed)
    n_fraud = int(round(n * fraud_ratio))
    n_legit = n - n_fraud

    legit_shift = np.zeros(n_legit)
    odd = rng.random(n_legit) < ODD_LEGIT_FRACTION
    legit_shift[odd] = ODD_LEGIT_SHIFT * separation

    fraud_shift = np.full(n_fraud, float(separation))
    stealthy = rng.random(n_fraud) < STEALTHY_FRAUD_FRACTION
    fraud_shift[stealthy] = STEALTHY_FRAUD_SHIFT * separation

    X_legit = _sample_block(rng, n_legit, legit_shift)
    X_fraud = _sample_block(rng, n_fraud, fraud_shift)
    X = np.vstack([X_legit, X_fraud])
    y = np.concatenate([np.zeros(n_legit, dtype=np.int64),
                        np.ones(n_fraud, dtype=np.int64)])

    order = rng.permutation(n)
    return LabeledDataset(
        feature_names=list(FEATURE_NAMES),
        X=X[order],
        y=y[order],
        provenance="synthetic",
    )


# --- CSV ------------------------------------------------------------------

def save_csv(ds: LabeledDataset, path: str) -> None:
    """Write header + rows; floats via repr so output is byte-stable."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(ds.feature_names + ["label"]) + "\n")
        for i in range(len(ds)):
            cells = [repr(float(v)) for v in ds.X[i]]
            cells.append(str(int(ds.y[i])))
            fh.write(",".join(cells) + "\n")


def load_csv(path: str) -> LabeledDataset:
    """Parse a feature CSV; header row required, last column must be "label"."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise SchemaError(f"{path}: empty file")
    header = lines[0].split(",")
    if len(header) < 2 or header[-1] != "label":
        raise SchemaError(f"{path}: last header column must be 'label'")
    names = header[:-1]
    if len(set(names)) != len(names):
        raise SchemaError(f"{path}: duplicate feature names")

    rows, labels = [], []
    for row_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) != len(header):
            raise ParseError(f"{path}: row {row_no}: expected {len(header)} cells, got {len(cells)}")
        values = []
        for col, cell in zip(names, cells[:-1]):
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(f"{path}: row {row_no}, column {col!r}: not a number: {cell!r}")
            if not math.isfinite(v):
                raise ParseError(f"{path}: row {row_no}, column {col!r}: non-finite value")
            values.append(v)
        label_cell = cells[-1].strip()
        if label_cell not in ("0", "1"):
            raise SchemaError(f"{path}: row {row_no}: label must be 0 or 1, got {label_cell!r}")
        rows.append(values)
        labels.append(int(label_cell))

    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return LabeledDataset(
        feature_names=names,
        X=np.array(rows, dtype=np.float64),
        y=np.array(labels, dtype=np.int64),
        provenance="csv",
    )


# --- split / normalize ------------------------------------------------------

def stratified_split(
    ds: LabeledDataset, test_fraction: float, seed: int = 0
) -> tuple[LabeledDataset, LabeledDataset]:
    """Disjoint, exhaustive split with per-class proportions within one row."""
    if not (0.0 < test_fraction < 1.0):
        raise InvalidConfig(f"test_fraction must be in (0,1) (got {test_fraction})")
    counts = ds.class_counts()
    if min(counts) < 2:
        raise InvalidConfig("each class needs at least 2 rows to split")

    rng = np.random.default_rng(seed)
    test_idx, train_idx = [], []
    for label in (LEGIT, FRAUD):
        class_idx = np.flatnonzero(ds.y == label)
        perm = rng.permutation(len(class_idx))
        k = int(round(len(class_idx) * test_fraction))
        shuffled = class_idx[perm]
        test_idx.extend(shuffled[:k].tolist())
        train_idx.extend(shuffled[k:].tolist())

    return ds.subset(sorted(train_idx)), ds.subset(sorted(test_idx))


@dataclass
class Normalizer:
    """Per-feature min-max scaling to [0,1]; constant features map to 0.5."""

    min_: np.ndarray
    max_: np.ndarray

    def apply_matrix(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        span = self.max_ - self.min_
        constant = span == 0
        safe_span = np.where(constant, 1.0, span)
        out = (X - self.min_) / safe_span
        out = np.clip(out, 0.0, 1.0)
        out[:, constant] = 0.5
        return out

    def apply(self, v) -> np.ndarray:
        return self.apply_matrix(np.asarray(v, dtype=np.float64).reshape(1, -1))[0]

    def to_dict(self) -> dict:
        return {"min": self.min_.tolist(), "max": self.max_.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "Normalizer":
        return cls(
            min_=np.array(data["min"], dtype=np.float64),
            max_=np.array(data["max"], dtype=np.float64),
        )


def fit_normalizer(train: LabeledDataset) -> Normalizer:
    if len(train) == 0:
        raise InvalidConfig("cannot fit normalizer on empty dataset")
    return Normalizer(min_=train.X.min(axis=0), max_=train.X.max(axis=0))


def normalize_dataset(ds: LabeledDataset, norm: Normalizer) -> LabeledDataset:
    return LabeledDataset(
        feature_names=list(ds.feature_names),
        X=norm.apply_matrix(ds.X),
        y=ds.y.copy(),
        provenance=ds.provenance,
    )


# --- resamplers -------------------------------------------------------------

def random_undersample(ds: LabeledDataset, seed: int = 0) -> LabeledDataset:
    """Sample the majority class down to the minority count, w/o replacement."""
    n_legit, n_fraud = ds.class_counts()
    if n_legit == 0 or n_fraud == 0:
        raise InvalidConfig("both classes must be present to undersample")
    minority_label = FRAUD if n_fraud <= n_legit else LEGIT
    majority_label = LEGIT if minority_label == FRAUD else FRAUD
    minority_count = min(n_legit, n_fraud)

    rng = np.random.default_rng(seed)
    majority_idx = np.flatnonzero(ds.y == majority_label)
    keep = rng.choice(majority_idx, size=minority_count, replace=False)
    selected = np.concatenate([np.flatnonzero(ds.y == minority_label), keep])
    return ds.subset(np.sort(selected))


def smote(ds: LabeledDataset, k: int = 5, seed: int = 0) -> LabeledDataset:
    """Oversample the minority along segments to its k nearest neighbors.

    Synthetic rows are x + u*(x_nn - x) with u ~ Uniform(0,1) and x_nn one
    of x's k nearest minority neighbors (Euclidean; k capped at minority-1).
    Appends until the classes are equal; majority rows are untouched.
    """
    if k < 1:
        raise InvalidConfig(f"k must be >= 1 (got {k})")
    n_legit, n_fraud = ds.class_counts()
    if n_legit == 0 or n_fraud == 0:
        raise InvalidConfig("both classes must be present for SMOTE")
    minority_label = FRAUD if n_fraud <= n_legit else LEGIT
    minority_count = min(n_legit, n_fraud)
    majority_count = max(n_legit, n_fraud)
    if minority_count < 2:
        raise InvalidConfig("SMOTE needs at least 2 minority rows")

    need = majority_count - minority_count
    if need == 0:
        return ds.subset(np.arange(len(ds)))

    k_eff = min(k, minority_count - 1)
    minority_idx = np.flatnonzero(ds.y == minority_label)
    M = ds.X[minority_idx]

    # Pairwise distances; stable argsort so neighbor ties break by index.
    diff = M[:, None, :] - M[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=2))
    np.fill_diagonal(dist, np.inf)
    neighbor_lists = np.argsort(dist, axis=1, kind="stable")[:, :k_eff]

    rng = np.random.default_rng(seed)
    synthetic = np.empty((need, ds.X.shape[1]))
    for i in range(need):
        base = int(rng.integers(0, minority_count))
        nn = int(neighbor_lists[base, int(rng.integers(0, k_eff))])
        u = rng.random()
        synthetic[i] = M[base] + u * (M[nn] - M[base])

    X = np.vstack([ds.X, synthetic])
    y = np.concatenate([ds.y, np.full(need, minority_label, dtype=np.int64)])
    return LabeledDataset(
        feature_names=list(ds.feature_names), X=X, y=y, provenance=ds.provenance
    )
