import json

import pytest

from websentinel.cli import (
    EXIT_DATA,
    EXIT_OK,
    EXIT_USAGE,
    format_eval_table,
    main,
)
from websentinel.metrics import classification_metrics

SMALL_MODELS_TOML = """
[models.forest]
n_trees = 4

[models.gbm]
n_rounds = 8

[models.mlp]
epochs = 40

[models.autoencoder]
epochs = 40
"""


@pytest.fixture()
def small_config(tmp_path):
    path = tmp_path / "config.toml"
    path.write_text(SMALL_MODELS_TOML)
    return str(path)


def gen(tmp_path, name="data.csv", n=240, ratio=0.2, seed=5):
    out = str(tmp_path / name)
    code = main([
        "gen-data", "--n", str(n), "--fraud-ratio", str(ratio),
        "--seed", str(seed), "--out", out,
    ])
    assert code == EXIT_OK
    return out


class TestGenData:
    def test_deterministic_bytes(self, tmp_path):
        a = gen(tmp_path, "a.csv", seed=7)
        b = gen(tmp_path, "b.csv", seed=7)
        assert open(a, "rb").read() == open(b, "rb").read()

    def test_different_seeds_differ(self, tmp_path):
        a = gen(tmp_path, "a.csv", seed=7)
        b = gen(tmp_path, "b.csv", seed=8)
        assert open(a, "rb").read() != open(b, "rb").read()

    def test_bad_ratio_is_data_error(self, tmp_path):
        code = main([
            "gen-data", "--n", "100", "--fraud-ratio", "2.0",
            "--seed", "1", "--out", str(tmp_path / "x.csv"),
        ])
        assert code == EXIT_DATA


class TestTrainEval:
    def test_train_eval_roundtrip(self, tmp_path, small_config, capsys):
        data = gen(tmp_path)
        bundle = str(tmp_path / "bundle.json")
        assert main([
            "train", "--data", data, "--config", small_config,
            "--out-bundle", bundle, "--seed", "3",
        ]) == EXIT_OK
        capsys.readouterr()
        assert main(["eval", "--bundle", bundle, "--data", data]) == EXIT_OK
        table = capsys.readouterr().out
        assert table.startswith("metric     value")
        for row in ("accuracy", "precision", "recall", "f1", "tp", "fp", "fn", "tn"):
            assert row in table

    def test_train_deterministic_bundles(self, tmp_path, small_config):
        data = gen(tmp_path)
        b1, b2 = str(tmp_path / "b1.json"), str(tmp_path / "b2.json")
        for out in (b1, b2):
            assert main([
                "train", "--data", data, "--config", small_config,
                "--out-bundle", out, "--seed", "3",
            ]) == EXIT_OK
        assert open(b1, "rb").read() == open(b2, "rb").read()

    def test_resample_options(self, tmp_path, small_config):
        data = gen(tmp_path)
        for how in ("undersample", "smote"):
            out = str(tmp_path / f"{how}.json")
            assert main([
                "train", "--data", data, "--config", small_config,
                "--out-bundle", out, "--seed", "3", "--resample", how,
            ]) == EXIT_OK

    def test_eval_json_output(self, tmp_path, small_config, capsys):
        data = gen(tmp_path)
        bundle = str(tmp_path / "bundle.json")
        main(["train", "--data", data, "--config", small_config,
              "--out-bundle", bundle, "--seed", "3"])
        capsys.readouterr()
        assert main(["eval", "--bundle", bundle, "--data", data, "--json"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert set(payload) == {"accuracy", "precision", "recall", "f1", "confusion"}

    def test_training_set_fit_dominates_heldout(self, tmp_path, small_config, capsys):
        # Same bundle evaluated on its own training data vs fresh data.
        train_csv = gen(tmp_path, "train.csv", n=300, seed=21)
        heldout_csv = gen(tmp_path, "heldout.csv", n=300, seed=22)
        bundle = str(tmp_path / "bundle.json")
        main(["train", "--data", train_csv, "--config", small_config,
              "--out-bundle", bundle, "--seed", "21"])
        capsys.readouterr()
        main(["eval", "--bundle", bundle, "--data", train_csv, "--json"])
        on_train = json.loads(capsys.readouterr().out)
        main(["eval", "--bundle", bundle, "--data", heldout_csv, "--json"])
        on_heldout = json.loads(capsys.readouterr().out)
        assert on_train["accuracy"] >= on_heldout["accuracy"]

    def test_missing_data_file(self, tmp_path, capsys):
        code = main(["eval", "--bundle", str(tmp_path / "no.json"),
                     "--data", str(tmp_path / "no.csv")])
        assert code == EXIT_DATA


class TestMetricsDefinitions:
    def test_hand_computed_confusion(self):
        # 2x2 fixture by hand: tp=2 fp=1 fn=1 tn=3.
        y_true = [1, 1, 1, 0, 0, 0, 0]
        y_pred = [1, 1, 0, 1, 0, 0, 0]
        m = classification_metrics(y_true, y_pred)
        assert m["confusion"] == {"tp": 2, "fp": 1, "fn": 1, "tn": 3}
        assert m["precision"] == pytest.approx(2 / 3)
        assert m["recall"] == pytest.approx(2 / 3)
        assert m["accuracy"] == pytest.approx(5 / 7)
        expected_f1 = 2 * (2 / 3) * (2 / 3) / ((2 / 3) + (2 / 3))
        assert m["f1"] == pytest.approx(expected_f1)

    def test_table_format_stable(self):
        m = classification_metrics([1, 0], [1, 0])
        assert format_eval_table(m) == format_eval_table(m)


class TestAnalyze:
    def test_malformed_url_exit_2(self, tmp_path, small_config, capsys):
        data = gen(tmp_path)
        bundle = str(tmp_path / "bundle.json")
        main(["train", "--data", data, "--config", small_config,
              "--out-bundle", bundle, "--seed", "3"])
        capsys.readouterr()
        code = main(["analyze", "--bundle", bundle, "--url", "notaurl"])
        assert code == EXIT_DATA
        assert "malformed_url" in capsys.readouterr().err

    def test_analyze_prints_verdict_and_top3(self, tmp_path, small_config, capsys):
        data = gen(tmp_path)
        bundle = str(tmp_path / "bundle.json")
        main(["train", "--data", data, "--config", small_config,
              "--out-bundle", bundle, "--seed", "3"])
        html = tmp_path / "page.html"
        html.write_text("<html><form action='http://evil.test/x'><input type='password'></form></html>")
        capsys.readouterr()
        code = main([
            "analyze", "--bundle", bundle,
            "--url", "http://login.fresh-site.tk/verify",
            "--html", str(html),
        ])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "score" in out and "verdict" in out
        assert out.count("\n  ") == 3  # exactly three explanation rows


class TestUsageErrors:
    def test_missing_required_flag(self, capsys):
        assert main(["gen-data", "--n", "100"]) == EXIT_USAGE
        assert "usage error" in capsys.readouterr().err

    def test_unknown_subcommand(self, capsys):
        assert main(["frobnicate"]) == EXIT_USAGE


class TestConfigFile:
    def test_unknown_key_rejected(self, tmp_path):
        bad = tmp_path / "bad.toml"
        bad.write_text("[models]\nunknown_thing = 3\n")
        data = gen(tmp_path)
        code = main(["train", "--data", data, "--config", str(bad),
                     "--out-bundle", str(tmp_path / "b.json")])
        assert code == EXIT_DATA

    def test_env_var_overrides_path(self, tmp_path, small_config, monkeypatch):
        # SENTINEL_CONFIG wins over --config.
        bad = tmp_path / "bad.toml"
        bad.write_text("[models]\nnope = 1\n")
        monkeypatch.setenv("SENTINEL_CONFIG", str(bad))
        data = gen(tmp_path)
        code = main(["train", "--data", data, "--config", small_config,
                     "--out-bundle", str(tmp_path / "b.json")])
        assert code == EXIT_DATA
