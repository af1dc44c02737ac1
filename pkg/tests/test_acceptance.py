"""Acceptance suite: one test per release criterion, each printing a PASS/FAIL
line (run with -s to see them on success)."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from datetime import date
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from ransomrisk.activity import EwmaParams, MonthlySeries, build_table, compute_ewma, stamp_ewma
from ransomrisk.cli import main
from ransomrisk.extract.client import FixtureClient, query, write_fixture
from ransomrisk.extract.process import serialize_responses, validate_features
from ransomrisk.extract.specs import FeatureSpec
from ransomrisk.extract.store import StixStore, query_adversary, synthesize_stix
from ransomrisk.forest import feature_importance, grow_tree, risk_level, train
from ransomrisk.forest.forest import ForestConfig
from ransomrisk.model import AttackRecord
from ransomrisk.synth import (
    FeatureWeights,
    SynthesisConfig,
    build_training_set,
    build_variant_metrics,
    did_permutate,
    generate_safe_samples,
)

from conftest import make_adversary, make_attack, make_victim
from corpus import build_corpus
from oracles import exact_best_split, mc_permutation_marginals


@contextmanager
def criterion(number: int, description: str):
    try:
        yield
    except BaseException:
        print(f"criterion {number}: FAIL  {description}")
        raise
    print(f"criterion {number}: PASS  {description}")


def run_pipeline_cli(config_path) -> None:
    result = CliRunner().invoke(main, ["pipeline", "--config", str(config_path)])
    assert result.exit_code == 0, f"pipeline failed: {result.output}{result.stderr}"


def test_criterion_1_end_to_end_f1_and_runtime(tmp_path):
    with criterion(1, "end-to-end pipeline F1 >= 0.95 in under 60 s"):
        paths = build_corpus(tmp_path / "c1")
        config = json.loads(Path(paths["config"]).read_text())
        assert config["synthesize"]["replicas"] == 10
        assert config["seed"] == 42
        assert config["train"]["trees"] == 100
        assert config["train"]["split"] == 0.2
        started = time.perf_counter()
        run_pipeline_cli(paths["config"])
        elapsed = time.perf_counter() - started

        attacks = json.loads((tmp_path / "c1" / "attacks.json").read_text())
        groups = {a["adversary_name"] for a in attacks}
        assert len(attacks) >= 50
        assert len(groups) >= 5
        metrics = json.loads((tmp_path / "c1" / "metrics.json").read_text())
        assert 0.95 <= metrics["f1"] <= 1.0, metrics
        assert elapsed < 60.0, f"pipeline took {elapsed:.1f}s"
        print(f"  f1={metrics['f1']:.4f} runtime={elapsed:.1f}s "
              f"victims={len(attacks)} groups={len(groups)}")


def _fleet(n_victims: int, n_groups: int = 5) -> list[AttackRecord]:
    """n_victims attack records spread over n_groups, activity stamped."""
    rng = np.random.default_rng(2024)
    adversaries = [
        make_adversary(name=f"group-{g}", ttps=("T1486",)) for g in range(n_groups)
    ]
    records = []
    for i in range(n_victims):
        adversary = adversaries[i % n_groups]
        victim = make_victim(
            name=f"victim-{i:04d}",
            country="US",
            revenue=int(rng.integers(1_000_000, 1_000_000_000)),
            employees=int(rng.integers(50, 20_000)),
        )
        attack_day = date(2021 + (i % 3), 1 + (i % 12), 1 + (i % 27))
        records.append(make_attack(victim, adversary, attack_day))
    return stamp_ewma(records, build_table(records))


def test_criterion_2_dataset_arithmetic():
    with criterion(2, "409 victims, 10 replicas, no originals -> 4090 + 4090"):
        attacks = _fleet(409)
        cfg = SynthesisConfig(replicas_per_victim=10, seed=42, include_originals=False)
        dataset = build_training_set(attacks, cfg)
        assert dataset.n_unsafe == 4090
        assert dataset.n_safe == 4090
        assert len(dataset.records) == 8180
        residual = abs(4100 - dataset.n_unsafe)
        assert residual <= 10
        print(f"  unsafe={dataset.n_unsafe} safe={dataset.n_safe} "
              f"residual vs published 4100 split = {residual}")


def test_criterion_3_ewma_property_suite():
    with criterion(3, "EWMA decay/bound/limit properties over 1000 random series"):
        rng = np.random.default_rng(77)
        for trial in range(1000):
            counts = rng.integers(0, 30, size=int(rng.integers(1, 40))).tolist()
            series = MonthlySeries(group="g", start_month=24252, counts=tuple(counts))
            values = compute_ewma(series, EwmaParams(lam=0.2))
            running_max = 0.0
            for t, x in enumerate(counts):
                running_max = max(running_max, float(x))
                if t > 0 and x == 0:
                    assert abs(values[t] - 0.2 * values[t - 1]) <= 1e-12
                assert 0.0 <= values[t] <= running_max
            identity = compute_ewma(series, EwmaParams(lam=0.0))
            assert identity == [float(x) for x in counts]
            frozen = compute_ewma(series, EwmaParams(lam=1.0))
            assert all(v == frozen[0] for v in frozen)


def test_criterion_4_safe_sample_guarantees():
    with criterion(4, "10k safe samples: permuted, out-of-profile, oracle-matched"):
        adversary = make_adversary()
        attacks = []
        for i in range(10):
            victim = make_victim(name=f"v{i}", country="US",
                                 revenue=100_000 + 917 * i, employees=100 + 13 * i)
            attacks.append(make_attack(victim, adversary, date(2023, 1 + i % 12, 5),
                                       ewma=1.4 + 0.05 * i))
        metrics = build_variant_metrics(attacks)
        samples = generate_safe_samples(metrics, n=1000, cfg=SynthesisConfig(seed=42))
        assert len(samples) == 10_000

        observed_countries = metrics["Phobos"].countries
        sources = {a.victim.name: a for a in attacks}
        permuted_countries = 0
        for sample in samples:
            source = sources[sample.victim.name]
            assert did_permutate(sample, source)
            if sample.victim.country != source.victim.country:
                permuted_countries += 1
                assert sample.victim.country not in observed_countries
        zero_fraction = sum(s.ewma == 0.0 for s in samples) / len(samples)
        country_fraction = permuted_countries / len(samples)
        oracle = mc_permutation_marginals(FeatureWeights(), trials=100_000, seed=7)
        assert zero_fraction == pytest.approx(oracle["ewma"], abs=0.02)
        assert country_fraction == pytest.approx(oracle["country"], abs=0.02)
        print(f"  ewma-zero fraction={zero_fraction:.4f} oracle={oracle['ewma']:.4f}; "
              f"country fraction={country_fraction:.4f} oracle={oracle['country']:.4f}")


def test_criterion_5_forest_oracle_equivalence():
    with criterion(5, "trainer splits equal brute-force best-Gini on 25 datasets"):
        rng = np.random.default_rng(99)
        checked = 0
        for _ in range(25):
            n = int(rng.integers(8, 201))
            w = int(rng.integers(2, 9))
            X = np.ascontiguousarray(rng.integers(0, 2, (n, w)).astype(np.float64))
            y = rng.integers(0, 2, n).astype(np.int8)
            if len(np.unique(y)) < 2:
                y[0] = 1 - y[0]
            recorded = []
            grow_tree(X, y, rng, max_features=None,
                      recorder=lambda idx, col, thr: recorded.append((idx.copy(), col, thr)))
            for idx, col, thr in recorded:
                assert exact_best_split(X, y, idx, np.arange(w, dtype=np.int64)) == (col, thr)
            checked += len(recorded)

        rows_seed = np.random.default_rng(3)
        rows = []
        for i in range(60):
            targeted = i % 2 == 0
            rows.append({
                "country": "US" if targeted else "DE", "sectors": ["manufacturing"],
                "org_type": "for-profit", "sophistication": "intermediate",
                "motive": "financial-gain", "intent": ["financial-theft"],
                "resource_level": "team",
                "revenue": int(rows_seed.integers(1000, 100000)),
                "employees": int(rows_seed.integers(10, 1000)),
                "ewma": 2.0 if targeted else 0.0, "capability_count": 1,
                "safe": 0 if targeted else 1,
            })
        forest = train(rows, ForestConfig(n_trees=50, seed=42))
        total = feature_importance(forest).sum()
        assert total == pytest.approx(1.0, abs=1e-9)
        print(f"  node splits verified={checked}; importance sum={total:.12f}")


def test_criterion_6_pipeline_determinism(tmp_path):
    with criterion(6, "identical seeds give byte-identical dataset/model/report"):
        outputs = []
        for run in ("one", "two"):
            root = tmp_path / run
            paths = build_corpus(root)
            run_pipeline_cli(paths["config"])
            report_args = [
                "report", "--model", str(root / "model.json"),
                "--store", str(root / "store.json"),
                "--ewma", str(root / "ewma.json"),
                "--company", str(paths["company"]), "--as-of", "2024-07",
                "--format", "json", "--out", str(root / "report.json"),
            ]
            result = CliRunner().invoke(main, report_args)
            assert result.exit_code == 0, result.output + str(result.stderr)
            outputs.append({
                "dataset": (root / "dataset.csv").read_bytes(),
                "model": (root / "model.json").read_bytes(),
                "report": (root / "report.json").read_bytes(),
            })
        for name in ("dataset", "model", "report"):
            assert outputs[0][name] == outputs[1][name], f"{name} differs between runs"


def test_criterion_7_risk_mapping_endpoints():
    with criterion(7, "risk scale endpoints and monotonicity"):
        assert risk_level(0.0) == (0, "None")
        assert risk_level(1.0) == (9, "Extremely High")
        previous = -1
        for i in range(1001):
            level, _ = risk_level(i / 1000)
            assert level >= previous
            previous = level


def test_criterion_8_cti_extraction_round_trip(tmp_path):
    with criterion(8, "fixture exchange -> validated features -> store round-trip"):
        specs = [
            FeatureSpec(name="adversary_name", intent="", guidance="", standard="Free text"),
            FeatureSpec(name="target_industry_sectors", intent="", guidance="",
                        standard="Enumerated STIX Industry Sectors"),
            FeatureSpec(name="attack_techniques", intent="", guidance="",
                        standard="MITRE ATT&CK technique IDs"),
        ]
        reply = json.dumps({
            "adversary_name": {"value": "Phobos", "rationale": "named in title"},
            "target_industry_sectors": {
                "value": ["manufacturing", "underwater-basket-weaving"],
                "rationale": "victim industries",
            },
            "attack_techniques": {"value": ["T1486", "T99"], "rationale": "listed"},
        })
        prompt = "extract features"
        write_fixture(tmp_path, prompt, [(reply[:40], "length_truncated"),
                                         (reply[40:], "complete")])
        parts = query(FixtureClient(tmp_path), prompt)
        unified = serialize_responses(parts)
        features = validate_features(unified, specs)

        assert features["target_industry_sectors"].accepted == ("manufacturing",)
        assert [r[0] for r in features["target_industry_sectors"].rejections] == [
            "underwater-basket-weaving"
        ]
        assert features["attack_techniques"].accepted == ("T1486",)
        assert [r[0] for r in features["attack_techniques"].rejections] == ["T99"]

        store = StixStore()
        store.insert(synthesize_stix(features, "Phobos", seed=1))
        profile = query_adversary(store, "Phobos")
        assert profile.capability_count == len(features["attack_techniques"].accepted) == 1
        assert profile.ttps == frozenset({"T1486"})


def test_criterion_9_multipart_serialization():
    with criterion(9, "100 random JSON documents survive 2-8 part splits"):
        from ransomrisk.extract.client import RawResponse
        from test_extract_process import _random_json

        rng = np.random.default_rng(123)
        for _ in range(100):
            doc = _random_json(rng, depth=0)
            text = json.dumps(doc)
            n_parts = int(rng.integers(2, 9))
            cuts = sorted(rng.integers(0, len(text) + 1, size=n_parts - 1).tolist())
            chunks, last = [], 0
            for cut in cuts:
                chunks.append(text[last:cut])
                last = cut
            chunks.append(text[last:])
            parts = [
                RawResponse(i, chunk,
                            "complete" if i == len(chunks) - 1 else "length_truncated")
                for i, chunk in enumerate(chunks)
            ]
            assert json.loads(serialize_responses(parts)) == doc
