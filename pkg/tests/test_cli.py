from __future__ import annotations

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from ransomrisk.cli import main


@pytest.fixture(scope="module")
def artifacts(corpus):
    """One full CLI pipeline run shared by the command tests."""
    runner = CliRunner()
    result = runner.invoke(main, ["pipeline", "--config", str(corpus["config"])])
    assert result.exit_code == 0, result.output + str(result.stderr)
    root = corpus["root"]
    return {
        "root": root,
        "store": root / "store.json",
        "attacks": root / "attacks.json",
        "ewma": root / "ewma.json",
        "dataset": root / "dataset.csv",
        "model": root / "model.json",
        "metrics": root / "metrics.json",
        "company": corpus["company"],
    }


class TestPipelineCommand:
    def test_all_artifacts_exist(self, artifacts):
        for name in ("store", "attacks", "ewma", "dataset", "model", "metrics"):
            assert artifacts[name].exists(), name

    def test_rejects_files_written(self, artifacts):
        ingest_rejects = json.loads((artifacts["root"] / "ingest_rejects.json").read_text())
        assert len(ingest_rejects["parse"]) == 2  # bad date + broken json line
        extract_rejects = json.loads((artifacts["root"] / "extract_rejects.json").read_text())
        assert "cuba.txt" in extract_rejects  # invalid sector and malformed ttp

    def test_missing_victims_file_names_stage_and_path(self, corpus, artifacts):
        config = json.loads(Path(corpus["config"]).read_text())
        config.pop("extract")  # store.json already exists from the shared run
        config["ingest"]["victims"] = "does-not-exist.jsonl"
        bad = corpus["root"] / "broken-config.json"
        bad.write_text(json.dumps(config))
        result = CliRunner().invoke(main, ["pipeline", "--config", str(bad)])
        assert result.exit_code == 3
        assert "ingest" in result.stderr
        assert "does-not-exist.jsonl" in result.stderr


class TestUsageErrors:
    def test_unknown_option_is_exit_2(self):
        result = CliRunner().invoke(main, ["ewma", "--no-such-flag"])
        assert result.exit_code == 2

    def test_missing_required_option_is_exit_2(self):
        result = CliRunner().invoke(main, ["train"])
        assert result.exit_code == 2


class TestDataAndModelErrors:
    def test_corrupt_model_is_exit_4(self, artifacts, tmp_path):
        broken = tmp_path / "model.json"
        broken.write_text("{not json")
        result = CliRunner().invoke(main, [
            "predict", "--model", str(broken), "--store", str(artifacts["store"]),
            "--ewma", str(artifacts["ewma"]), "--company", str(artifacts["company"]),
            "--group", "Phobos", "--as-of", "2024-07",
        ])
        assert result.exit_code == 4
        assert "error" in result.stderr

    def test_unknown_group_is_exit_3(self, artifacts):
        result = CliRunner().invoke(main, [
            "predict", "--model", str(artifacts["model"]), "--store",
            str(artifacts["store"]), "--ewma", str(artifacts["ewma"]),
            "--company", str(artifacts["company"]),
            "--group", "NoSuchCrew", "--as-of", "2024-07",
        ])
        assert result.exit_code == 3


class TestPredictCommand:
    def test_matching_active_group_scores_extremely_high(self, artifacts):
        result = CliRunner().invoke(main, [
            "predict", "--model", str(artifacts["model"]), "--store",
            str(artifacts["store"]), "--ewma", str(artifacts["ewma"]),
            "--company", str(artifacts["company"]),
            "--group", "Phobos", "--as-of", "2024-07",
        ])
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert payload["level"] == 9
        assert payload["label"] == "Extremely High"
        assert len(payload["top_features"]) <= 6

    def test_dormant_disjoint_group_scores_low(self, artifacts):
        result = CliRunner().invoke(main, [
            "predict", "--model", str(artifacts["model"]), "--store",
            str(artifacts["store"]), "--ewma", str(artifacts["ewma"]),
            "--company", str(artifacts["company"]),
            "--group", "Cuba", "--as-of", "2024-07",
        ])
        payload = json.loads(result.output)
        assert payload["level"] <= 3


class TestReportCommand:
    def test_markdown_report_ordering(self, artifacts, tmp_path):
        out = tmp_path / "report.md"
        result = CliRunner().invoke(main, [
            "report", "--model", str(artifacts["model"]), "--store",
            str(artifacts["store"]), "--ewma", str(artifacts["ewma"]),
            "--company", str(artifacts["company"]), "--as-of", "2024-07",
            "--format", "markdown", "--out", str(out),
        ])
        assert result.exit_code == 0, result.output
        text = out.read_text()
        assert text.index("| Phobos |") < text.index("| Cuba |")

    def test_json_report_reruns_identically(self, artifacts):
        args = [
            "report", "--model", str(artifacts["model"]), "--store",
            str(artifacts["store"]), "--ewma", str(artifacts["ewma"]),
            "--company", str(artifacts["company"]), "--as-of", "2024-07",
            "--format", "json",
        ]
        first = CliRunner().invoke(main, args)
        second = CliRunner().invoke(main, args)
        assert first.output == second.output
        payload = json.loads(first.output)
        assert [a["group"] for a in payload["assessments"]][0] == "Phobos"


class TestEvaluateCommand:
    def test_metrics_match_training_report(self, artifacts):
        result = CliRunner().invoke(main, [
            "evaluate", "--model", str(artifacts["model"]), "--dataset",
            str(artifacts["dataset"]), "--split", "0.2", "--seed", "42",
        ])
        assert result.exit_code == 0, result.output
        fresh = json.loads(result.output)
        stored = json.loads(artifacts["metrics"].read_text())
        assert fresh == stored


class TestIngestCommand:
    def test_standalone_ingest_run(self, corpus, artifacts, tmp_path):
        out = tmp_path / "attacks.json"
        rejects = tmp_path / "rejects.json"
        result = CliRunner().invoke(main, [
            "ingest", "--victims", str(corpus["victims"]), "--format", "jsonl",
            "--directory", str(corpus["directory"]),
            "--cutoff", "2021-01-01",
            "--adversaries", str(artifacts["store"]),
            "--out", str(out), "--rejects", str(rejects),
        ])
        assert result.exit_code == 0, result.output
        attacks = json.loads(out.read_text())
        assert len(attacks) == corpus["expected_attacks"]
        assert json.loads(out.read_text()) == json.loads(artifacts["attacks"].read_text())


class TestStandaloneStages:
    def test_extract_command(self, corpus, tmp_path):
        store_path = tmp_path / "store.json"
        result = CliRunner().invoke(main, [
            "extract", "--reports", str(corpus["reports"]),
            "--prompts", str(corpus["prompts"]),
            "--client", "fixture", "--fixtures", str(corpus["fixtures"]),
            "--store", str(store_path), "--rejects", str(tmp_path / "rejects.json"),
        ])
        assert result.exit_code == 0, result.output + str(result.stderr)
        payload = json.loads(store_path.read_text())
        actors = [o for o in payload["objects"] if o["type"] == "threat-actor"]
        assert len(actors) == 6

    def test_ewma_command(self, artifacts, tmp_path):
        out = tmp_path / "ewma.json"
        result = CliRunner().invoke(main, [
            "ewma", "--attacks", str(artifacts["attacks"]),
            "--lambda", "0.2", "--out", str(out),
        ])
        assert result.exit_code == 0, result.output
        table = json.loads(out.read_text())
        assert table["lambda"] == 0.2
        assert "Phobos" in table["groups"]
        first = table["groups"]["Phobos"][0]
        assert set(first) == {"month", "v"}

    def test_synthesize_command_with_weights_file(self, artifacts, tmp_path):
        weights = tmp_path / "weights.json"
        weights.write_text(json.dumps({
            "country_of_origin": 0.8,
            "number_of_employees": 0.3,
            "revenue": 0.7,
            "company_type": 0.3,
            "ewma": 0.95,
        }))
        out = tmp_path / "dataset.csv"
        result = CliRunner().invoke(main, [
            "synthesize", "--attacks", str(artifacts["attacks"]),
            "--ewma", str(artifacts["ewma"]), "--replicas", "10", "--seed", "42",
            "--weights", str(weights), "--out", str(out),
        ])
        assert result.exit_code == 0, result.output + str(result.stderr)
        # Defaults match the weights file, so output equals the pipeline's.
        assert out.read_bytes() == artifacts["dataset"].read_bytes()

    def test_global_seed_overrides_stage_seed(self, artifacts, tmp_path):
        out_a = tmp_path / "a.csv"
        out_b = tmp_path / "b.csv"
        base = ["synthesize", "--attacks", str(artifacts["attacks"]),
                "--ewma", str(artifacts["ewma"]), "--replicas", "10"]
        first = CliRunner().invoke(main, base + ["--seed", "1", "--out", str(out_a)])
        assert first.exit_code == 0, first.output + str(first.stderr)
        result = CliRunner().invoke(
            main, ["--seed", "1"] + base + ["--seed", "99", "--out", str(out_b)]
        )
        assert result.exit_code == 0, result.output + str(result.stderr)
        assert out_a.read_bytes() == out_b.read_bytes()

    def test_low_replica_imbalance_is_rejected(self, artifacts, tmp_path):
        # 60 originals + 120 replicas vs 120 safe exceeds the balance guard.
        result = CliRunner().invoke(main, [
            "synthesize", "--attacks", str(artifacts["attacks"]),
            "--ewma", str(artifacts["ewma"]), "--replicas", "2",
            "--out", str(tmp_path / "d.csv"),
        ])
        assert result.exit_code == 3
        assert "imbalance" in result.stderr
