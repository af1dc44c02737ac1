"""Risk prediction and report rendering.

A prediction joins an organization's profile with one group's adversary
attributes and that group's activity at the requested month, encodes the row
with the model's frozen schema, and maps the ensemble confidence onto the
0-9 risk scale. Reports bundle per-group assessments sorted by severity plus
provenance (seeds, training counts, model hash) so results stay auditable.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .activity import EwmaTable, parse_month
from .errors import UnknownGroup
from .extract.store import StixStore
from .forest.encoding import encode_row
from .forest.forest import Forest, feature_importance, predict_proba_matrix, serialize_model
from .forest.risk import RiskAssessment
from .model import VictimProfile

REPORT_VERSION = 1
TOP_FEATURES = 6


@dataclass(frozen=True)
class PredictionRequest:
    company: VictimProfile
    group: str
    as_of: str  # YYYY-MM


def _active_top_features(forest: Forest, x) -> tuple[tuple[str, float], ...]:
    importances = feature_importance(forest)
    names = forest.schema.columns
    active = [(names[i], float(importances[i])) for i in range(len(names)) if x[i] != 0.0]
    active.sort(key=lambda item: (-item[1], item[0]))
    return tuple(active[:TOP_FEATURES])


def predict(
    forest: Forest,
    store: StixStore,
    table: EwmaTable,
    request: PredictionRequest,
) -> RiskAssessment:
    adversary = store.query_adversary(request.group)  # raises UnknownAdversary
    if adversary.name not in table.series:
        raise UnknownGroup(request.group)
    activity = table.value_at(adversary.name, parse_month(request.as_of))
    row = {
        "country": request.company.country,
        "sectors": sorted(request.company.sectors),
        "org_type": request.company.org_type,
        "revenue": request.company.revenue,
        "employees": request.company.employees,
        "ewma": activity,
        "sophistication": adversary.sophistication,
        "motive": adversary.motive,
        "intent": sorted(adversary.intent),
        "resource_level": adversary.resource_level,
        "capability_count": adversary.capability_count,
    }
    x = encode_row(forest.schema, row)
    confidence = float(predict_proba_matrix(forest, x.reshape(1, -1))[0])
    return RiskAssessment.from_confidence(
        group=adversary.name,
        confidence=confidence,
        top_features=_active_top_features(forest, x),
    )


@dataclass(frozen=True)
class RiskReport:
    assessments: tuple[RiskAssessment, ...]
    provenance: dict

    @classmethod
    def build(cls, assessments, forest: Forest, as_of: str, company: VictimProfile) -> "RiskReport":
        ordered = tuple(
            sorted(assessments, key=lambda a: (-a.level, -a.confidence, a.group))
        )
        model_hash = hashlib.sha256(serialize_model(forest)).hexdigest()[:16]
        provenance = {
            "model_hash": model_hash,
            "seed": forest.config.seed,
            "trees": forest.config.n_trees,
            "trained_on": dict(forest.trained_on),
            "as_of": as_of,
            "company": company.name,
        }
        return cls(assessments=ordered, provenance=provenance)

    def to_dict(self) -> dict:
        return {
            "version": REPORT_VERSION,
            "provenance": self.provenance,
            "assessments": [a.to_dict() for a in self.assessments],
        }


def render_json(report: RiskReport) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


def render_markdown(report: RiskReport) -> str:
    lines = ["# Ransomware risk report", ""]
    prov = report.provenance
    lines.append(f"Company: **{prov.get('company', '?')}**  ")
    lines.append(f"As of: {prov.get('as_of', '?')}  ")
    lines.append(
        f"Model: `{prov.get('model_hash', '?')}` "
        f"(seed {prov.get('seed', '?')}, {prov.get('trees', '?')} trees, "
        f"{prov.get('trained_on', {}).get('rows', '?')} training rows)"
    )
    lines.append("")
    lines.append("| Group | Level | Label | Confidence | Top features |")
    lines.append("|---|---|---|---|---|")
    for a in report.assessments:
        features = ", ".join(f"{name} ({value:.3f})" for name, value in a.top_features)
        lines.append(
            f"| {a.group} | {a.level} | {a.label} | {a.confidence:.4f} | {features} |"
        )
    lines.append("")
    return "\n".join(lines)


def render(report: RiskReport, format: str) -> str:
    if format == "json":
        return render_json(report)
    if format == "markdown":
        return render_markdown(report)
    raise ValueError(f"unknown report format {format!r}")
