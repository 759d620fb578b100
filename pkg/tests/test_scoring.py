import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from websentinel import scoring
from websentinel.dataset import Normalizer
from websentinel.errors import InvalidConfig, InvalidWeights
from websentinel.manifest import FEATURE_INDEX, FEATURE_NAMES, N_FEATURES
from websentinel.models.boosting import GradientBoosting
from websentinel.models.ensemble import Ensemble, ModelOutputs
from websentinel.models.forest import RandomForest
from websentinel.models.linear import LinearSvm
from websentinel.models.neural import Autoencoder, Mlp
from websentinel.models.trees import DecisionTree
from websentinel.scoring import (
    RiskAssessment,
    Verdict,
    aggregate_score,
    assign_verdict,
    explain,
    rescore_with_session,
)
from websentinel.session_monitor import EMPTY_SESSION_FEATURES, SessionFeatures

UNIFORM = {"tree": 0.2, "forest": 0.2, "gbm": 0.2, "svm": 0.2, "mlp": 0.2}


def outputs(tree=0.0, forest=0.0, gbm=0.0, svm=0.0, mlp=0.0,
            anomaly_score=0.0, anomaly_flag=False) -> ModelOutputs:
    return ModelOutputs(tree=tree, forest=forest, gbm=gbm, svm=svm, mlp=mlp,
                        anomaly_score=anomaly_score, anomaly_flag=anomaly_flag)


def constant_tree(value: float) -> DecisionTree:
    tree = DecisionTree(max_depth=1)
    tree.n_features = N_FEATURES
    tree.nodes = [{"fraud_fraction": value, "sample_count": 1}]
    return tree


def split_tree(feature: int, threshold: float = 0.5) -> DecisionTree:
    tree = DecisionTree(max_depth=1)
    tree.n_features = N_FEATURES
    tree.nodes = [
        {"feature_index": feature, "threshold": threshold, "left": 1, "right": 2},
        {"fraud_fraction": 0.0, "sample_count": 1},
        {"fraud_fraction": 1.0, "sample_count": 1},
    ]
    return tree


def toy_ensemble(tree: DecisionTree, weights=None, medians=None) -> Ensemble:
    """Everything except the supplied tree is constant and inert."""
    forest = RandomForest([constant_tree(0.5)], [[0]], 1, False, 0)
    gbm = GradientBoosting(base_log_odds=0.0, stages=[])
    svm = LinearSvm(weights=np.zeros(N_FEATURES), bias=0.0, lam=0.1)
    mlp = Mlp(np.zeros((N_FEATURES, 2)), np.zeros(2), np.zeros((2, 1)), np.zeros(1))
    ae = Autoencoder(
        np.zeros((N_FEATURES, 2)), np.zeros(2),
        np.zeros((2, N_FEATURES)), np.zeros(N_FEATURES),
        anomaly_threshold=1e9,  # never fires
    )
    norm = Normalizer(min_=np.zeros(N_FEATURES), max_=np.ones(N_FEATURES))
    return Ensemble(
        tree=tree, forest=forest, gbm=gbm, svm=svm, mlp=mlp, autoencoder=ae,
        normalizer=norm,
        weights=weights or {"tree": 1.0, "forest": 0.0, "gbm": 0.0, "svm": 0.0, "mlp": 0.0},
        manifest=list(FEATURE_NAMES),
        medians=np.zeros(N_FEATURES) if medians is None else np.asarray(medians, float),
        training_seed=0,
    )


class TestAggregateScore:
    def test_uniform_mean(self):
        out = outputs(tree=0.2, forest=0.4, gbm=0.6, svm=0.8, mlp=0.5)
        assert aggregate_score(out, UNIFORM) == pytest.approx(50.0)

    def test_all_zero(self):
        assert aggregate_score(outputs(), UNIFORM) == 0.0

    def test_anomaly_floor(self):
        out = outputs(anomaly_flag=True, anomaly_score=9.0)
        assert aggregate_score(out, UNIFORM) == 75.0

    def test_floor_does_not_lower_high_scores(self):
        out = outputs(tree=1, forest=1, gbm=1, svm=1, mlp=1, anomaly_flag=True)
        assert aggregate_score(out, UNIFORM) == 100.0

    def test_invalid_weights(self):
        with pytest.raises(InvalidWeights):
            aggregate_score(outputs(), {"tree": 1.0})
        with pytest.raises(InvalidWeights):
            aggregate_score(outputs(), {**UNIFORM, "tree": -0.2, "forest": 0.6})
        bad_sum = {"tree": 0.5, "forest": 0.5, "gbm": 0.5, "svm": 0.0, "mlp": 0.0}
        with pytest.raises(InvalidWeights):
            aggregate_score(outputs(), bad_sum)

    @given(
        st.lists(st.floats(min_value=0, max_value=1), min_size=5, max_size=5),
        st.integers(min_value=0, max_value=4),
        st.floats(min_value=0, max_value=1),
    )
    def test_monotone_in_each_probability(self, probs, which, bump):
        names = ["tree", "forest", "gbm", "svm", "mlp"]
        base = outputs(**dict(zip(names, probs)))
        raised_probs = list(probs)
        raised_probs[which] = min(1.0, raised_probs[which] + bump)
        raised = outputs(**dict(zip(names, raised_probs)))
        assert aggregate_score(raised, UNIFORM) >= aggregate_score(base, UNIFORM)


class TestAssignVerdict:
    @pytest.mark.parametrize(
        "score,expected",
        [
            (10.0, Verdict.SAFE),
            (29.999, Verdict.SAFE),
            (30.0, Verdict.CAUTION),
            (69.999, Verdict.CAUTION),
            (70.0, Verdict.DANGER),
            (100.0, Verdict.DANGER),
        ],
    )
    def test_boundaries(self, score, expected):
        assert assign_verdict(score) == expected

    def test_invalid_thresholds(self):
        with pytest.raises(InvalidConfig):
            assign_verdict(10.0, caution_threshold=80, danger_threshold=70)

    @given(st.floats(min_value=0, max_value=100), st.floats(min_value=0, max_value=100))
    def test_monotone(self, a, b):
        lo, hi = min(a, b), max(a, b)
        order = {Verdict.SAFE: 0, Verdict.CAUTION: 1, Verdict.DANGER: 2}
        assert order[assign_verdict(lo)] <= order[assign_verdict(hi)]


class TestExplain:
    def test_constant_ensemble_all_deltas_zero(self):
        ens = toy_ensemble(constant_tree(0.7))
        deltas = explain(ens, [0.3] * N_FEATURES)
        assert all(delta == 0.0 for _, delta in deltas)

    def test_single_split_tree_isolates_feature(self):
        feature = 3
        ens = toy_ensemble(split_tree(feature))
        x = [0.0] * N_FEATURES
        x[feature] = 0.9  # routes right -> fraud 1.0; median 0 routes left
        deltas = dict(explain(ens, x))
        assert deltas[FEATURE_NAMES[feature]] == pytest.approx(100.0)
        for name, delta in deltas.items():
            if name != FEATURE_NAMES[feature]:
                assert delta == 0.0

    def test_sorted_by_absolute_delta(self, golden_bundle, known_bad_vector):
        deltas = explain(golden_bundle, known_bad_vector)
        magnitudes = [abs(d) for _, d in deltas]
        assert magnitudes == sorted(magnitudes, reverse=True)

    def test_golden_top_feature(self, golden_bundle, known_bad_vector, golden_expected):
        deltas = explain(golden_bundle, known_bad_vector)
        assert deltas[0][0] == golden_expected["known_bad"]["top_feature"]


def make_assessment(score: float) -> RiskAssessment:
    return RiskAssessment(
        score=score, verdict=assign_verdict(score),
        model_outputs=outputs(), explanation=[],
    )


class TestRescoreWithSession:
    def test_empty_session_unchanged(self):
        ens = toy_ensemble(split_tree(FEATURE_INDEX["rapid_redirect_count"]))
        base = [0.0] * N_FEATURES
        prev_score, _ = scoring.score_vector(ens, base)
        prev = make_assessment(prev_score)
        new = rescore_with_session(prev, base, EMPTY_SESSION_FEATURES, ens)
        assert new.score == prev.score

    def test_hidden_redirect_floors_to_danger(self):
        ens = toy_ensemble(constant_tree(0.0))
        prev = make_assessment(5.0)
        session = SessionFeatures(
            redirect_chain_length=1, cross_origin_hops=1, rapid_redirect_count=0,
            third_party_request_ratio=0.0, unique_third_party_domains=0,
            external_form_submit=False, sensitive_field_focus_count=0,
            hidden_redirect_flag=True,
        )
        new = rescore_with_session(prev, [0.0] * N_FEATURES, session, ens)
        assert new.score >= 70.0
        assert new.verdict == Verdict.DANGER

    def test_external_sensitive_submit_floor(self):
        ens = toy_ensemble(constant_tree(0.0))
        prev = make_assessment(5.0)
        session = SessionFeatures(
            redirect_chain_length=0, cross_origin_hops=0, rapid_redirect_count=0,
            third_party_request_ratio=0.0, unique_third_party_domains=0,
            external_form_submit=True, sensitive_field_focus_count=2,
            hidden_redirect_flag=False,
        )
        new = rescore_with_session(prev, [0.0] * N_FEATURES, session, ens)
        assert new.score >= 70.0
        assert new.verdict == Verdict.DANGER

    def test_ratchet_never_lowers(self):
        # Session evidence drives the model score to 0, yet the previous
        # score sticks.
        ens = toy_ensemble(split_tree(FEATURE_INDEX["rapid_redirect_count"]))
        rapid = SessionFeatures(
            redirect_chain_length=3, cross_origin_hops=0, rapid_redirect_count=3,
            third_party_request_ratio=0.0, unique_third_party_domains=0,
            external_form_submit=False, sensitive_field_focus_count=0,
            hidden_redirect_flag=False,
        )
        base = [0.0] * N_FEATURES
        first = rescore_with_session(make_assessment(0.0), base, rapid, ens)
        assert first.score == 100.0
        second = rescore_with_session(first, base, EMPTY_SESSION_FEATURES, ens)
        assert second.score == 100.0
        assert second.verdict == Verdict.DANGER
