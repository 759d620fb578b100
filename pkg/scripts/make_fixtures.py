#!/usr/bin/env python3
"""Regenerate the frozen test fixtures (golden bundle + expected values).

Everything here is deterministic, so re-running reproduces the committed
files byte for byte. The golden values are computed once by this script
and then asserted verbatim by the test suite.
"""

import json
import os
import sys

import numpy as np

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIXTURES = os.path.join(ROOT, "tests", "fixtures")

from websentinel import dataset as D
from websentinel import scoring
from websentinel.config import EngineConfig
from websentinel.feature_extraction import FixtureMetadataProvider
from websentinel.models.ensemble import save_bundle, train_ensemble
from websentinel.service import AnalysisEngine

SEED = 42
FIXED_NOW = 1753920000.0  # 2025-07-31T00:00:00Z
KNOWN_BAD_URL = "http://secure-login.bank-verify.tk/account/confirm?id=7731"
KNOWN_GOOD_URL = "https://shop.trusted-goods.com/catalog/shoes?page=2"


def main() -> int:
    cfg = EngineConfig()

    ds = D.generate_synthetic(2000, 0.1, 1.0, seed=SEED)
    train, test = D.stratified_split(ds, 0.25, seed=SEED)
    ensemble = train_ensemble(train, cfg.models, seed=SEED,
                              weights=cfg.aggregation_weights())
    bundle_path = os.path.join(FIXTURES, "bundle_seed42.json")
    save_bundle(ensemble, bundle_path)
    print(f"wrote {bundle_path}")

    provider = FixtureMetadataProvider(
        path=os.path.join(FIXTURES, "metadata_fixture.json")
    )
    engine = AnalysisEngine(
        ensemble=ensemble, config=cfg, metadata_provider=provider,
        clock=lambda: FIXED_NOW,
    )

    with open(os.path.join(FIXTURES, "known_bad.html"), encoding="utf-8") as fh:
        bad_html = fh.read()

    bad_vec, _ = engine._extract_vector(KNOWN_BAD_URL, bad_html)
    good_vec, _ = engine._extract_vector(KNOWN_GOOD_URL, "<html><body><a href='/a'>a</a></body></html>")

    outputs = ensemble.predict(bad_vec)
    score = scoring.aggregate_score(outputs, ensemble.weights)
    explanation = scoring.explain(ensemble, bad_vec)
    verdict = scoring.assign_verdict(score)

    good_outputs = ensemble.predict(good_vec)
    good_score = scoring.aggregate_score(good_outputs, ensemble.weights)

    with open(os.path.join(FIXTURES, "known_bad_vector.json"), "w") as fh:
        json.dump({"url": KNOWN_BAD_URL, "vector": bad_vec}, fh, indent=1)
        fh.write("\n")

    golden = {
        "fixed_now": FIXED_NOW,
        "known_bad_url": KNOWN_BAD_URL,
        "known_good_url": KNOWN_GOOD_URL,
        "known_bad": {
            "probabilities": outputs.probabilities(),
            "anomaly_score": outputs.anomaly_score,
            "anomaly_flag": outputs.anomaly_flag,
            "score": score,
            "verdict": verdict.value,
            "top_feature": explanation[0][0],
        },
        "known_good": {
            "score": good_score,
            "verdict": scoring.assign_verdict(good_score).value,
        },
    }
    golden_path = os.path.join(FIXTURES, "golden_expected.json")
    with open(golden_path, "w") as fh:
        json.dump(golden, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print(f"wrote {golden_path}")
    print(json.dumps(golden, indent=1, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
