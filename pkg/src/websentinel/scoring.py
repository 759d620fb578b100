"""Risk aggregation: 0-100 score, verdict tiers, explanations, rescoring.

Within a browsing session the score only ratchets upward -- later
well-behaved activity can never talk a suspicious page back down.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum

from .errors import DimensionMismatch, InvalidConfig, InvalidWeights
from .manifest import overlay_session_features
from .models.ensemble import Ensemble, ModelOutputs, PROBABILITY_MODELS
from .session_monitor import SessionFeatures

DEFAULT_CAUTION_THRESHOLD = 30.0
DEFAULT_DANGER_THRESHOLD = 70.0
DEFAULT_ANOMALY_FLOOR = 75.0
SESSION_RULE_FLOOR = 70.0


class Verdict(str, Enum):
    SAFE = "safe"
    CAUTION = "caution"
    DANGER = "danger"


@dataclass
class RiskAssessment:
    score: float
    verdict: Verdict
    model_outputs: ModelOutputs
    explanation: list[tuple[str, float]]
    cached: bool = False
    assessed_at: float = field(default_factory=time.time)

    def to_dict(self) -> dict:
        return {
            "score": self.score,
            "verdict": self.verdict.value,
            "model_outputs": self.model_outputs.to_dict(),
            "explanation": [
                {"feature": name, "delta": delta} for name, delta in self.explanation
            ],
            "cached": self.cached,
            "assessed_at": self.assessed_at,
        }


def aggregate_score(outputs: ModelOutputs, weights: dict[str, float],
                    anomaly_floor: float = DEFAULT_ANOMALY_FLOOR) -> float:
    """100 * weighted probability mean, floored when the anomaly flag fires."""
    if set(weights) != set(PROBABILITY_MODELS):
        raise InvalidWeights(f"weights must cover {PROBABILITY_MODELS}")
    if any(w < 0 for w in weights.values()):
        raise InvalidWeights("weights must be non-negative")
    if abs(sum(weights.values()) - 1.0) > 1e-9:
        raise InvalidWeights(f"weights must sum to 1 (got {sum(weights.values())})")

    probs = outputs.probabilities()
    score = 100.0 * sum(weights[name] * probs[name] for name in PROBABILITY_MODELS)
    if outputs.anomaly_flag:
        score = max(score, anomaly_floor)
    return min(100.0, max(0.0, score))


def assign_verdict(
    score: float,
    caution_threshold: float = DEFAULT_CAUTION_THRESHOLD,
    danger_threshold: float = DEFAULT_DANGER_THRESHOLD,
) -> Verdict:
    """Tier boundaries are inclusive for the higher tier."""
    if not (0 <= caution_threshold < danger_threshold <= 100):
        raise InvalidConfig("need 0 <= caution < danger <= 100")
    if score >= danger_threshold:
        return Verdict.DANGER
    if score >= caution_threshold:
        return Verdict.CAUTION
    return Verdict.SAFE


def score_vector(ensemble: Ensemble, x, anomaly_floor: float = DEFAULT_ANOMALY_FLOOR
                 ) -> tuple[float, ModelOutputs]:
    outputs = ensemble.predict(x)
    return aggregate_score(outputs, ensemble.weights, anomaly_floor), outputs


def batch_scores(ensemble: Ensemble, X, anomaly_floor: float = DEFAULT_ANOMALY_FLOOR):
    """Aggregate scores for a whole matrix; used by eval and experiments."""
    import numpy as np

    outputs = ensemble.predict_matrix(X)
    score = 100.0 * sum(
        ensemble.weights[name] * outputs[name] for name in PROBABILITY_MODELS
    )
    score = np.where(outputs["anomaly_flag"], np.maximum(score, anomaly_floor), score)
    return np.clip(score, 0.0, 100.0)


def explain(ensemble: Ensemble, x, anomaly_floor: float = DEFAULT_ANOMALY_FLOOR
            ) -> list[tuple[str, float]]:
    """Median-substitution deltas, sorted by |delta| descending.

    delta_i = score(x) - score(x with feature i replaced by its training
    median); exact and model-agnostic, no background-set machinery.
    """
    if len(x) != len(ensemble.manifest):
        raise DimensionMismatch(
            f"expected {len(ensemble.manifest)} features, got {len(x)}"
        )
    base_score, _ = score_vector(ensemble, x, anomaly_floor)
    deltas = []
    for i, name in enumerate(ensemble.manifest):
        substituted = list(x)
        substituted[i] = float(ensemble.medians[i])
        alt_score, _ = score_vector(ensemble, substituted, anomaly_floor)
        deltas.append((i, name, base_score - alt_score))
    deltas.sort(key=lambda item: (-abs(item[2]), item[0]))
    return [(name, delta) for _, name, delta in deltas]


def assess(ensemble: Ensemble, x, caution_threshold=DEFAULT_CAUTION_THRESHOLD,
           danger_threshold=DEFAULT_DANGER_THRESHOLD,
           anomaly_floor=DEFAULT_ANOMALY_FLOOR,
           with_explanation: bool = True) -> RiskAssessment:
    """Full assessment of one raw-scale feature vector."""
    score, outputs = score_vector(ensemble, x, anomaly_floor)
    explanation = explain(ensemble, x, anomaly_floor) if with_explanation else []
    return RiskAssessment(
        score=score,
        verdict=assign_verdict(score, caution_threshold, danger_threshold),
        model_outputs=outputs,
        explanation=explanation,
    )


def rescore_with_session(
    prev: RiskAssessment,
    base_features,
    session: SessionFeatures,
    ensemble: Ensemble,
    caution_threshold=DEFAULT_CAUTION_THRESHOLD,
    danger_threshold=DEFAULT_DANGER_THRESHOLD,
    anomaly_floor=DEFAULT_ANOMALY_FLOOR,
    with_explanation: bool = True,
) -> RiskAssessment:
    """Re-run the models with live session evidence overlaid; never lowers.

    Rule floors: a hidden redirect, or an off-site form submission while
    sensitive fields were focused, forces the score to at least 70.
    """
    if len(base_features) != len(ensemble.manifest):
        raise DimensionMismatch(
            f"expected {len(ensemble.manifest)} features, got {len(base_features)}"
        )
    vec = overlay_session_features(list(base_features), session)
    score, outputs = score_vector(ensemble, vec, anomaly_floor)

    if session.hidden_redirect_flag:
        score = max(score, SESSION_RULE_FLOOR)
    if session.external_form_submit and session.sensitive_field_focus_count >= 1:
        score = max(score, SESSION_RULE_FLOOR)

    final = max(prev.score, score)
    return RiskAssessment(
        score=final,
        verdict=assign_verdict(final, caution_threshold, danger_threshold),
        model_outputs=outputs,
        explanation=explain(ensemble, vec, anomaly_floor) if with_explanation else [],
    )
