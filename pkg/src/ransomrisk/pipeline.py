"""End-to-end pipeline orchestration.

A single JSON config file names every stage's inputs, outputs, and parameters;
stages run in dependency order (extract feeds the adversary store that ingest
filters against): extract -> ingest -> ewma -> synthesize -> train. Outputs
are deterministic given the seeds, so reruns produce byte-identical artifacts.
Stage failures are re-raised with the stage name and offending input path.
"""

from __future__ import annotations

import json
from datetime import date
from pathlib import Path

from .activity import EwmaParams, build_table, load_table, save_table, stamp_ewma
from .dataset import write_dataset_csv
from .errors import PipelineStageError, RansomriskError
from .extract.client import FixtureClient, HttpChatClient, query
from .extract.process import serialize_responses, validate_features
from .extract.prompts import compile_prompt
from .extract.specs import load_bundle
from .extract.store import StixStore, synthesize_stix
from .forest.forest import ForestConfig, save_model, train
from .forest.metrics import evaluate, split_train_test
from .ingest import ingest_feed, load_attacks, save_attacks
from .synth import FeatureWeights, SynthesisConfig, build_training_set, load_weights

STAGES = ("extract", "ingest", "ewma", "synthesize", "train")


def _write_json(payload, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def run_extract(
    reports_dir,
    prompts_dir,
    store_path,
    rejects_path=None,
    client_kind: str = "fixture",
    fixtures_dir=None,
    seed: int = 42,
) -> StixStore:
    """Extract adversary features from every report and fill the store.

    Reports naming the same adversary merge: the first report wins on scalar
    actor properties, relationship objects accumulate.
    """
    specs = load_bundle(prompts_dir)
    if client_kind == "fixture":
        if fixtures_dir is None:
            raise RansomriskError("fixture client needs a fixtures directory")
        client = FixtureClient(fixtures_dir)
    elif client_kind == "http":
        client = HttpChatClient()
    else:
        raise RansomriskError(f"unknown client kind {client_kind!r}")

    store = StixStore()
    rejects = {}
    for path in sorted(Path(reports_dir).iterdir()):
        if path.suffix not in (".txt", ".md"):
            continue
        document = path.read_text("utf-8")
        prompt = compile_prompt(specs, document)
        parts = query(client, prompt)
        unified = serialize_responses(parts)
        features = validate_features(unified, specs)
        names = features.accepted("adversary_name")
        adversary_name = names[0] if names else ""
        store.insert(synthesize_stix(features, adversary_name, seed=seed))
        report_rejects = features.rejection_report()
        if report_rejects:
            rejects[path.name] = report_rejects
    store.save(store_path)
    if rejects_path is not None:
        _write_json(rejects, rejects_path)
    return store


def run_ingest(
    victims_path,
    format,
    directory_path,
    cutoff: date,
    adversaries_path,
    out_path,
    rejects_path=None,
):
    attacks, report = ingest_feed(
        victims_path, format, directory_path, cutoff, adversaries_path
    )
    save_attacks(attacks, out_path)
    if rejects_path is not None:
        _write_json(report, rejects_path)
    return attacks


def run_ewma(attacks_path, lam: float, out_path):
    attacks = load_attacks(attacks_path)
    table = build_table(attacks, EwmaParams(lam=lam))
    save_table(table, out_path)
    return table


def run_synthesize(
    attacks_path,
    ewma_path,
    out_path,
    replicas: int = 10,
    seed: int = 42,
    weights_path=None,
    include_originals: bool = True,
    safe_per_victim: int | None = None,
):
    attacks = load_attacks(attacks_path)
    table = load_table(ewma_path)
    stamped = stamp_ewma(attacks, table)
    weights = load_weights(weights_path) if weights_path else FeatureWeights()
    cfg = SynthesisConfig(
        replicas_per_victim=replicas,
        seed=seed,
        weights=weights,
        include_originals=include_originals,
        safe_per_victim=safe_per_victim,
    )
    dataset = build_training_set(stamped, cfg)
    write_dataset_csv(dataset.rows(), out_path)
    return dataset


def run_train(
    dataset_path,
    model_path,
    metrics_path=None,
    trees: int = 100,
    seed: int = 42,
    split: float = 0.2,
):
    from .dataset import read_dataset_csv

    rows = read_dataset_csv(dataset_path)
    train_rows, test_rows = split_train_test(rows, split, seed)
    config = ForestConfig(n_trees=trees, seed=seed, test_fraction=split)
    forest = train(train_rows, config)
    save_model(forest, model_path)
    report = evaluate(forest, test_rows)
    if metrics_path is not None:
        _write_json(report.to_dict(), metrics_path)
    return forest, report


def load_config(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def run_pipeline(config: dict, base_dir, seed_override: int | None = None) -> dict[str, str]:
    """Run every configured stage; returns artifact name -> path."""
    base = Path(base_dir)
    seed = seed_override if seed_override is not None else int(config.get("seed", 42))

    def resolve(name):
        return base / name if name else None

    artifacts: dict[str, str] = {}

    def _stage(name: str, input_path, fn):
        try:
            return fn()
        except RansomriskError as exc:
            raise PipelineStageError(name, str(input_path), exc) from exc
        except OSError as exc:
            raise PipelineStageError(name, str(exc.filename or input_path), exc) from exc
        except (ValueError, KeyError, TypeError) as exc:
            raise PipelineStageError(name, str(input_path), exc) from exc

    cfg = config.get("extract")
    if cfg:
        _stage("extract", resolve(cfg["reports"]), lambda: run_extract(
            reports_dir=resolve(cfg["reports"]),
            prompts_dir=resolve(cfg["prompts"]),
            store_path=resolve(cfg["store"]),
            rejects_path=resolve(cfg.get("rejects")),
            client_kind=cfg.get("client", "fixture"),
            fixtures_dir=resolve(cfg.get("fixtures")),
            seed=seed,
        ))
        artifacts["store"] = str(resolve(cfg["store"]))

    cfg = config.get("ingest")
    if cfg:
        _stage("ingest", resolve(cfg["victims"]), lambda: run_ingest(
            victims_path=resolve(cfg["victims"]),
            format=cfg.get("format", "jsonl"),
            directory_path=resolve(cfg.get("directory")),
            cutoff=date.fromisoformat(cfg.get("cutoff", "2021-01-01")),
            adversaries_path=resolve(cfg["adversaries"]),
            out_path=resolve(cfg["out"]),
            rejects_path=resolve(cfg.get("rejects")),
        ))
        artifacts["attacks"] = str(resolve(cfg["out"]))

    cfg = config.get("ewma")
    if cfg:
        _stage("ewma", resolve(cfg["attacks"]), lambda: run_ewma(
            attacks_path=resolve(cfg["attacks"]),
            lam=float(cfg.get("lambda", 0.2)),
            out_path=resolve(cfg["out"]),
        ))
        artifacts["ewma"] = str(resolve(cfg["out"]))

    cfg = config.get("synthesize")
    if cfg:
        _stage("synthesize", resolve(cfg["attacks"]), lambda: run_synthesize(
            attacks_path=resolve(cfg["attacks"]),
            ewma_path=resolve(cfg["ewma"]),
            out_path=resolve(cfg["out"]),
            replicas=int(cfg.get("replicas", 10)),
            seed=seed,
            weights_path=resolve(cfg.get("weights")),
            include_originals=bool(cfg.get("include_originals", True)),
            safe_per_victim=cfg.get("safe_per_victim"),
        ))
        artifacts["dataset"] = str(resolve(cfg["out"]))

    cfg = config.get("train")
    if cfg:
        _stage("train", resolve(cfg["dataset"]), lambda: run_train(
            dataset_path=resolve(cfg["dataset"]),
            model_path=resolve(cfg["model"]),
            metrics_path=resolve(cfg.get("metrics")),
            trees=int(cfg.get("trees", 100)),
            seed=seed,
            split=float(cfg.get("split", 0.2)),
        ))
        artifacts["model"] = str(resolve(cfg["model"]))
        if cfg.get("metrics"):
            artifacts["metrics"] = str(resolve(cfg["metrics"]))

    return artifacts
