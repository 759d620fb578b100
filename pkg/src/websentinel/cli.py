"""Operator command line: generate data, train, evaluate, analyze, serve.

Exit codes: 0 success, 1 usage error, 2 data/schema error, 3 internal
error. Classification for eval metrics uses score >= 50 as "predicted
fraud" -- a fixed cut distinct from the safe/caution/danger tiers.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import dataset as ds_mod
from . import scoring
from .config import EngineConfig, load_config
from .errors import WebSentinelError
from .metrics import classification_metrics
from .models.ensemble import load_bundle, save_bundle, train_ensemble

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

EVAL_FRAUD_CUTOFF = 50.0


class _UsageExit(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse exits 2 by default; the exit-code table reserves 2 for
        # data errors, so usage problems surface as code 1 instead.
        raise _UsageExit(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="websentinel", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-data", help="generate a synthetic labeled dataset")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--fraud-ratio", type=float, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--separation", type=float, default=1.0)
    gen.add_argument("--out", required=True)

    train = sub.add_parser("train", help="train an ensemble bundle from a CSV")
    train.add_argument("--data", required=True)
    train.add_argument("--config", default=None)
    train.add_argument("--out-bundle", required=True)
    train.add_argument("--seed", type=int, default=0)
    train.add_argument(
        "--resample", choices=["none", "undersample", "smote"], default="none"
    )

    ev = sub.add_parser("eval", help="evaluate a bundle against a CSV")
    ev.add_argument("--bundle", required=True)
    ev.add_argument("--data", required=True)
    ev.add_argument("--config", default=None)
    ev.add_argument("--json", action="store_true", dest="as_json")

    an = sub.add_parser("analyze", help="score one URL")
    an.add_argument("--bundle", required=True)
    an.add_argument("--url", required=True)
    an.add_argument("--html", default=None, help="file with the page HTML")
    an.add_argument("--config", default=None)

    sv = sub.add_parser("serve", help="run the HTTP scoring service")
    sv.add_argument("--bundle", required=True)
    sv.add_argument("--store", default=None, help="journal path (restored if present)")
    sv.add_argument("--port", type=int, default=8300)
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--config", default=None)
    sv.add_argument("--metadata-fixture", default=None,
                    help="JSON host-metadata table for offline deployments")

    return parser


def _cmd_gen_data(args) -> int:
    ds = ds_mod.generate_synthetic(
        n=args.n, fraud_ratio=args.fraud_ratio,
        separation=args.separation, seed=args.seed,
    )
    ds_mod.save_csv(ds, args.out)
    n_legit, n_fraud = ds.class_counts()
    print(f"wrote {args.out}: {len(ds)} rows ({n_legit} legit, {n_fraud} fraud)")
    return EXIT_OK


def _resample(ds, how: str, seed: int):
    if how == "undersample":
        return ds_mod.random_undersample(ds, seed=seed)
    if how == "smote":
        return ds_mod.smote(ds, seed=seed)
    return ds


def _cmd_train(args) -> int:
    config = load_config(args.config)
    ds = ds_mod.load_csv(args.data)
    ds = _resample(ds, args.resample, args.seed)
    ensemble = train_ensemble(
        ds, config.models, seed=args.seed, weights=config.aggregation_weights()
    )
    save_bundle(ensemble, args.out_bundle)
    print(f"wrote {args.out_bundle}: trained on {len(ds)} rows (seed {args.seed})")
    return EXIT_OK


def evaluate_bundle(ensemble, ds, anomaly_floor: float) -> dict:
    scores = scoring.batch_scores(ensemble, ds.X, anomaly_floor)
    predicted = (scores >= EVAL_FRAUD_CUTOFF).astype(int)
    return classification_metrics(ds.y, predicted)


def format_eval_table(metrics: dict) -> str:
    c = metrics["confusion"]
    lines = [
        "metric     value",
        f"accuracy   {metrics['accuracy']:.4f}",
        f"precision  {metrics['precision']:.4f}",
        f"recall     {metrics['recall']:.4f}",
        f"f1         {metrics['f1']:.4f}",
        f"tp         {c['tp']}",
        f"fp         {c['fp']}",
        f"fn         {c['fn']}",
        f"tn         {c['tn']}",
    ]
    return "\n".join(lines)


def _cmd_eval(args) -> int:
    config = load_config(args.config)
    ensemble = load_bundle(args.bundle)
    ds = ds_mod.load_csv(args.data)
    metrics = evaluate_bundle(ensemble, ds, config.scoring["anomaly_floor"])
    if args.as_json:
        print(json.dumps(metrics, sort_keys=True))
    else:
        print(format_eval_table(metrics))
    return EXIT_OK


def _cmd_analyze(args) -> int:
    from .service import AnalysisEngine

    config = load_config(args.config)
    ensemble = load_bundle(args.bundle)
    html = None
    if args.html is not None:
        with open(args.html, "r", encoding="utf-8") as fh:
            html = fh.read()

    engine = AnalysisEngine(ensemble=ensemble, config=config)
    result = engine.analyze(url=args.url, html=html)
    print(f"url      {args.url}")
    print(f"score    {result['score']:.1f}")
    print(f"verdict  {result['verdict']}")
    print("top features:")
    for rank, item in enumerate(result["explanation"][:3], start=1):
        print(f"  {rank}. {item['label']}  {item['delta']:+.2f}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .feature_extraction import FixtureMetadataProvider, NullMetadataProvider
    from .reputation_store import ReputationStore
    from .service import AnalysisEngine, create_app

    config = load_config(args.config)
    ensemble = load_bundle(args.bundle)

    store_path = args.store or config.store["path"]
    store = ReputationStore.restore(
        store_path,
        default_ttl=config.store["ttl_seconds"],
        journal_path=store_path,
    )
    seed_list = config.store["seed_list"]
    if seed_list:
        loaded = store.load_seed_list(seed_list)
        print(f"loaded {loaded} seed-list entries from {seed_list}")

    provider = (
        FixtureMetadataProvider(path=args.metadata_fixture)
        if args.metadata_fixture
        else NullMetadataProvider()
    )
    engine = AnalysisEngine(
        ensemble=ensemble, store=store, config=config, metadata_provider=provider
    )
    app = create_app(engine)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


_COMMANDS = {
    "gen-data": _cmd_gen_data,
    "train": _cmd_train,
    "eval": _cmd_eval,
    "analyze": _cmd_analyze,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageExit as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        return _COMMANDS[args.command](args)
    except WebSentinelError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as exc:
        print(f"error [missing_file]: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
