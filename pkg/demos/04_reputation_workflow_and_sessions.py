"""The full verdict workflow: cache check, ML fallback, session escalation.

Run: python demos/04_reputation_workflow_and_sessions.py
"""

from websentinel import dataset as D
from websentinel.config import EngineConfig
from websentinel.feature_extraction import FixtureMetadataProvider
from websentinel.models.ensemble import train_ensemble
from websentinel.service import AnalysisEngine
from websentinel.session_monitor import EventKind, SessionEvent

cfg = EngineConfig()
train, _ = D.stratified_split(D.generate_synthetic(2000, 0.1, seed=42), 0.25, seed=42)
ensemble = train_ensemble(train, cfg.models, seed=42, weights=cfg.aggregation_weights())

provider = FixtureMetadataProvider({
    "shop.trusted-goods.com": {
        "created_date": "2012-03-04T00:00:00Z",
        "cert_valid": True,
        "cert_expiry": "2026-01-15T00:00:00Z",
    },
})
engine = AnalysisEngine(ensemble=ensemble, config=cfg, metadata_provider=provider)

url = "https://shop.trusted-goods.com/catalog/shoes?page=2"

# First visit: cache miss, the ensemble runs.
first = engine.analyze(url, session_id="demo-session")
print(f"first analyze:  cached={first['cached']}  score={first['score']:.1f}  "
      f"verdict={first['verdict']}")

# Second visit: served from the reputation store, zero model evaluations.
evals_before = ensemble.eval_count
second = engine.analyze(url)
print(f"second analyze: cached={second['cached']}  score={second['score']:.1f}  "
      f"model evaluations used: {ensemble.eval_count - evals_before}")

# Session evidence arrives: a redirect with no user click behind it.
# The score ratchets and the rule floor kicks in.
snapshot = engine.record_session_event("demo-session", SessionEvent(
    kind=EventKind.REDIRECT,
    timestamp_ms=5000,
    target_host="evil.test",
    cross_origin=True,
))
print(f"\nhidden redirect observed -> score={snapshot['score']:.1f} "
      f"verdict={snapshot['verdict']} alert={snapshot['alert']}")

# Later well-behaved activity cannot talk the score back down.
calm = engine.record_session_event("demo-session", SessionEvent(
    kind=EventKind.CLICK, timestamp_ms=9000,
))
print(f"calm click afterwards    -> score={calm['score']:.1f} (ratchet holds)")

# The updated verdict also landed in the reputation store:
entry = engine.store.lookup(url)
print(f"\nstore now says: {entry.verdict} ({entry.score:.1f}) source={entry.source}")
