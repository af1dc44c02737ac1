"""Flat tabular view of attack records and deterministic CSV round-tripping.

The CSV written here is what the classifier trains on; column names match the
fields the encoding schema reports. Multi-valued cells (sectors, intent) are
`;`-joined in sorted order so files are byte-identical across runs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import date
from typing import Iterable

from .errors import DataError
from .model import AdversaryProfile, AttackRecord, VictimProfile

COLUMNS = (
    "group",
    "victim",
    "attack_date",
    "country",
    "sectors",
    "org_type",
    "revenue",
    "employees",
    "ewma",
    "sophistication",
    "motive",
    "intent",
    "resource_level",
    "capability_count",
    "safe",
)


def flatten_record(record: AttackRecord) -> dict:
    if record.ewma is None:
        raise DataError(
            f"record for {record.victim.name!r} has no activity value stamped"
        )
    return {
        "group": record.adversary_name,
        "victim": record.victim.name,
        "attack_date": record.attack_date.isoformat(),
        "country": record.victim.country,
        "sectors": sorted(record.victim.sectors),
        "org_type": record.victim.org_type,
        "revenue": record.victim.revenue,
        "employees": record.victim.employees,
        "ewma": record.ewma,
        "sophistication": record.adversary.sophistication,
        "motive": record.adversary.motive,
        "intent": sorted(record.adversary.intent),
        "resource_level": record.adversary.resource_level,
        "capability_count": record.adversary.capability_count,
        "safe": record.safe,
    }


def record_from_row(row: dict) -> AttackRecord:
    victim = VictimProfile(
        name=row["victim"],
        country=row["country"],
        sectors=frozenset(row["sectors"]),
        revenue=row["revenue"],
        employees=row["employees"],
        org_type=row["org_type"],
    )
    adversary = AdversaryProfile(
        name=row["group"],
        sophistication=row["sophistication"],
        motive=row["motive"],
        intent=frozenset(row["intent"]),
        resource_level=row["resource_level"],
        capability_count=row["capability_count"],
    )
    return AttackRecord(
        victim=victim,
        adversary_name=row["group"],
        attack_date=date.fromisoformat(row["attack_date"]),
        adversary=adversary,
        ewma=row["ewma"],
        safe=row["safe"],
    )


@dataclass(frozen=True)
class LabeledDataset:
    records: tuple[AttackRecord, ...]
    n_unsafe: int
    n_safe: int
    seed: int

    def rows(self) -> list[dict]:
        return [flatten_record(r) for r in self.records]


def write_dataset_csv(rows: Iterable[dict], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(COLUMNS)
        for row in rows:
            writer.writerow([
                row["group"],
                row["victim"],
                row["attack_date"],
                row["country"],
                ";".join(row["sectors"]),
                row["org_type"],
                row["revenue"],
                row["employees"],
                repr(float(row["ewma"])),
                row["sophistication"],
                row["motive"],
                ";".join(row["intent"]),
                row["resource_level"],
                row["capability_count"],
                row["safe"],
            ])


def read_dataset_csv(path) -> list[dict]:
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise DataError(f"dataset {path} lacks columns: {sorted(missing)}")
        for raw in reader:
            rows.append({
                "group": raw["group"],
                "victim": raw["victim"],
                "attack_date": raw["attack_date"],
                "country": raw["country"],
                "sectors": [s for s in raw["sectors"].split(";") if s],
                "org_type": raw["org_type"],
                "revenue": int(raw["revenue"]),
                "employees": int(raw["employees"]),
                "ewma": float(raw["ewma"]),
                "sophistication": raw["sophistication"],
                "motive": raw["motive"],
                "intent": [s for s in raw["intent"].split(";") if s],
                "resource_level": raw["resource_level"],
                "capability_count": int(raw["capability_count"]),
                "safe": int(raw["safe"]),
            })
    return rows
