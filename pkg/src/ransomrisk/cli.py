"""Command-line front end.

Subcommands mirror the pipeline stages (ingest, extract, ewma, synthesize,
train, evaluate) plus predict, report, and pipeline. Diagnostics go to stderr;
exit codes: 0 success, 2 usage error, 3 data error, 4 model error.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from . import __version__
from .activity import load_table
from .errors import DataError, ModelError, RansomriskError
from .extract.store import StixStore
from .forest.forest import load_model
from .forest.metrics import evaluate, split_train_test
from .model import VictimProfile
from .pipeline import (
    load_config,
    run_ewma,
    run_extract,
    run_ingest,
    run_pipeline,
    run_synthesize,
    run_train,
)
from .report import PredictionRequest, RiskReport, predict, render


def guarded(fn):
    """Map package errors onto the documented exit codes, reporting on stderr."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ModelError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(4)
        except DataError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(3)
        except RansomriskError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(3)

    return wrapper


def _status(ctx, message: str) -> None:
    if not ctx.obj.get("quiet"):
        click.echo(message, err=True)


@click.group()
@click.version_option(__version__)
@click.option("--seed", type=int, default=None, help="Override every stage seed.")
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="Pipeline config file (used by the pipeline subcommand).")
@click.option("--quiet", is_flag=True, help="Suppress status output.")
@click.pass_context
def main(ctx, seed, config_path, quiet):
    """Ransomware risk prioritization pipeline."""
    ctx.obj = {"seed": seed, "config": config_path, "quiet": quiet}


def _seed(ctx, local_seed: int) -> int:
    return ctx.obj["seed"] if ctx.obj.get("seed") is not None else local_seed


@main.command()
@click.option("--victims", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "feed_format", type=click.Choice(["jsonl", "csv"]), default="jsonl")
@click.option("--directory", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--cutoff", type=click.DateTime(formats=["%Y-%m-%d"]),
              default="2021-01-01", show_default=True)
@click.option("--adversaries", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path())
@click.option("--rejects", type=click.Path(), default=None)
@click.pass_context
@guarded
def ingest(ctx, victims, feed_format, directory, cutoff, adversaries, out, rejects):
    """Parse, filter, enrich, and join a victim disclosure feed."""
    attacks = run_ingest(
        victims_path=victims,
        format=feed_format,
        directory_path=directory,
        cutoff=cutoff.date(),
        adversaries_path=adversaries,
        out_path=out,
        rejects_path=rejects,
    )
    _status(ctx, f"ingested {len(attacks)} attack records -> {out}")


@main.command()
@click.option("--reports", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--prompts", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--client", "client_kind", type=click.Choice(["fixture", "http"]),
              default="fixture", show_default=True)
@click.option("--fixtures", type=click.Path(file_okay=False), default=None)
@click.option("--store", "store_path", required=True, type=click.Path())
@click.option("--rejects", type=click.Path(), default=None)
@click.pass_context
@guarded
def extract(ctx, reports, prompts, client_kind, fixtures, store_path, rejects):
    """Extract adversary profiles from threat reports into the STIX store."""
    store = run_extract(
        reports_dir=reports,
        prompts_dir=prompts,
        store_path=store_path,
        rejects_path=rejects,
        client_kind=client_kind,
        fixtures_dir=fixtures,
        seed=_seed(ctx, 42),
    )
    _status(ctx, f"stored {len(store)} objects -> {store_path}")


@main.command()
@click.option("--attacks", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--lambda", "lam", type=float, default=0.2, show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.pass_context
@guarded
def ewma(ctx, attacks, lam, out):
    """Compute each group's smoothed monthly attack activity."""
    table = run_ewma(attacks_path=attacks, lam=lam, out_path=out)
    _status(ctx, f"computed activity for {len(table.series)} groups -> {out}")


@main.command()
@click.option("--attacks", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--ewma", "ewma_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--replicas", type=int, default=10, show_default=True)
@click.option("--seed", "local_seed", type=int, default=42, show_default=True)
@click.option("--weights", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--include-originals/--no-include-originals", default=True, show_default=True)
@click.option("--safe-n", type=int, default=None,
              help="Safe samples per victim (defaults to --replicas).")
@click.option("--out", required=True, type=click.Path())
@click.pass_context
@guarded
def synthesize(ctx, attacks, ewma_path, replicas, local_seed, weights,
               include_originals, safe_n, out):
    """Generate the balanced synthetic training dataset."""
    dataset = run_synthesize(
        attacks_path=attacks,
        ewma_path=ewma_path,
        out_path=out,
        replicas=replicas,
        seed=_seed(ctx, local_seed),
        weights_path=weights,
        include_originals=include_originals,
        safe_per_victim=safe_n,
    )
    _status(
        ctx,
        f"assembled {len(dataset.records)} records "
        f"({dataset.n_unsafe} unsafe / {dataset.n_safe} safe) -> {out}",
    )


@main.command("train")
@click.option("--dataset", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--trees", type=int, default=100, show_default=True)
@click.option("--seed", "local_seed", type=int, default=42, show_default=True)
@click.option("--split", type=float, default=0.2, show_default=True)
@click.option("--model", "model_path", required=True, type=click.Path())
@click.option("--metrics", "metrics_path", type=click.Path(), default=None)
@click.pass_context
@guarded
def train_cmd(ctx, dataset, trees, local_seed, split, model_path, metrics_path):
    """Train the risk classifier and report held-out metrics."""
    forest, report = run_train(
        dataset_path=dataset,
        model_path=model_path,
        metrics_path=metrics_path,
        trees=trees,
        seed=_seed(ctx, local_seed),
        split=split,
    )
    _status(
        ctx,
        f"trained {forest.config.n_trees} trees; "
        f"precision={report.precision:.4f} recall={report.recall:.4f} f1={report.f1:.4f}",
    )


@main.command("evaluate")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--dataset", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--split", type=float, default=0.2, show_default=True)
@click.option("--seed", "local_seed", type=int, default=42, show_default=True)
@click.option("--metrics", "metrics_path", type=click.Path(), default=None)
@click.pass_context
@guarded
def evaluate_cmd(ctx, model_path, dataset, split, local_seed, metrics_path):
    """Evaluate a saved model on the dataset's held-out split."""
    from .dataset import read_dataset_csv

    forest = load_model(model_path)
    rows = read_dataset_csv(dataset)
    _, test_rows = split_train_test(rows, split, _seed(ctx, local_seed))
    report = evaluate(forest, test_rows)
    if metrics_path:
        with open(metrics_path, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    click.echo(json.dumps(report.to_dict(), indent=2, sort_keys=True))


def _load_company(path) -> VictimProfile:
    with open(path, encoding="utf-8") as fh:
        return VictimProfile.from_dict(json.load(fh))


@main.command("predict")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--store", "store_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--ewma", "ewma_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--company", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--group", required=True)
@click.option("--as-of", "as_of", required=True, help="Month for the activity lookup (YYYY-MM).")
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
@guarded
def predict_cmd(ctx, model_path, store_path, ewma_path, company, group, as_of, out):
    """Score one (company, group) pair."""
    forest = load_model(model_path)
    store = StixStore.load(store_path)
    table = load_table(ewma_path)
    request = PredictionRequest(company=_load_company(company), group=group, as_of=as_of)
    assessment = predict(forest, store, table, request)
    payload = json.dumps(assessment.to_dict(), indent=2, sort_keys=True)
    if out:
        Path(out).write_text(payload + "\n", encoding="utf-8")
    click.echo(payload)


@main.command("report")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--store", "store_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--ewma", "ewma_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--company", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--as-of", "as_of", required=True)
@click.option("--groups", default=None,
              help="Comma-separated group subset (defaults to every stored group).")
@click.option("--format", "report_format", type=click.Choice(["json", "markdown"]),
              default="markdown", show_default=True)
@click.option("--out", type=click.Path(), default=None)
@click.pass_context
@guarded
def report_cmd(ctx, model_path, store_path, ewma_path, company, as_of, groups,
               report_format, out):
    """Rank every known group's risk against one company."""
    forest = load_model(model_path)
    store = StixStore.load(store_path)
    table = load_table(ewma_path)
    profile = _load_company(company)
    if groups:
        names = [g.strip() for g in groups.split(",") if g.strip()]
    else:
        names = [a.name for a in store.adversaries() if a.name in table.series]
    assessments = [
        predict(forest, store, table, PredictionRequest(profile, name, as_of))
        for name in names
    ]
    risk_report = RiskReport.build(assessments, forest, as_of=as_of, company=profile)
    rendered = render(risk_report, report_format)
    if out:
        Path(out).write_text(rendered, encoding="utf-8")
        _status(ctx, f"wrote report -> {out}")
    else:
        click.echo(rendered, nl=False)


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Defaults to the global --config value.")
@click.pass_context
@guarded
def pipeline(ctx, config_path):
    """Run every configured stage end to end."""
    path = config_path or ctx.obj.get("config")
    if not path:
        raise click.UsageError("pipeline needs --config")
    config = load_config(path)
    artifacts = run_pipeline(config, Path(path).parent, seed_override=ctx.obj.get("seed"))
    for name, artifact in sorted(artifacts.items()):
        _status(ctx, f"{name}: {artifact}")


if __name__ == "__main__":
    main()
