"""Victim-record ingestion: parse disclosure feeds, filter, enrich, and join
against known adversaries to produce attack records.

Input is JSON Lines (one object per line) or CSV with the same field names;
multi-valued `sectors` cells in CSV are `;`-separated. Malformed rows are
collected into a rejection report instead of being dropped silently.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from datetime import date
from typing import BinaryIO, Iterable, Mapping, Optional, Union

from .errors import (
    DataError,
    FormatError,
    IncompleteProfile,
    UnknownAdversary,
)
from .model import AdversaryProfile, AttackRecord, VictimProfile, build_adversary_index

RAW_FIELDS = (
    "group_name",
    "victim_name",
    "discovered",
    "description",
    "country",
    "sectors",
    "revenue",
    "employees",
    "org_type",
)


@dataclass(frozen=True)
class RawVictimRecord:
    """One disclosure row before enrichment; optional fields may be None."""

    group_name: str
    victim_name: str
    discovered: date
    description: str = ""
    country: Optional[str] = None
    sectors: Optional[tuple[str, ...]] = None
    revenue: Optional[int] = None
    employees: Optional[int] = None
    org_type: Optional[str] = None


@dataclass(frozen=True)
class FilterPolicy:
    cutoff_date: date
    known_adversaries: frozenset[str]
    require_description: bool = True

    @classmethod
    def for_adversaries(
        cls,
        adversaries: Iterable[AdversaryProfile],
        cutoff_date: date,
        require_description: bool = True,
    ) -> "FilterPolicy":
        names: set[str] = set()
        for profile in adversaries:
            names |= profile.known_names()
        return cls(cutoff_date=cutoff_date, known_adversaries=frozenset(names),
                   require_description=require_description)


@dataclass
class ParseResult:
    records: list[RawVictimRecord] = field(default_factory=list)
    rejections: list[FormatError] = field(default_factory=list)


def _coerce_record(obj: Mapping, line_no: int) -> RawVictimRecord:
    for required in ("group_name", "victim_name", "discovered"):
        if not obj.get(required):
            raise FormatError(line_no, f"missing required field {required!r}")
    try:
        discovered = date.fromisoformat(str(obj["discovered"]))
    except ValueError as exc:
        raise FormatError(line_no, f"bad date {obj['discovered']!r}: {exc}") from exc
    sectors = obj.get("sectors")
    if sectors is not None:
        if isinstance(sectors, str):
            sectors = [s for s in sectors.split(";") if s.strip()]
        sectors = tuple(str(s).strip() for s in sectors) or None

    def _int_or_none(key: str) -> Optional[int]:
        value = obj.get(key)
        if value is None or value == "":
            return None
        try:
            return int(value)
        except (TypeError, ValueError) as exc:
            raise FormatError(line_no, f"bad integer for {key!r}: {value!r}") from exc

    return RawVictimRecord(
        group_name=str(obj["group_name"]).strip(),
        victim_name=str(obj["victim_name"]).strip(),
        discovered=discovered,
        description=str(obj.get("description") or ""),
        country=(str(obj["country"]).strip() or None) if obj.get("country") else None,
        sectors=sectors,
        revenue=_int_or_none("revenue"),
        employees=_int_or_none("employees"),
        org_type=(str(obj["org_type"]).strip() or None) if obj.get("org_type") else None,
    )


def parse_victims(stream: Union[BinaryIO, bytes], format: str = "jsonl") -> ParseResult:
    """Parse a victim feed. Returns records plus per-line rejections."""
    if isinstance(stream, bytes):
        stream = io.BytesIO(stream)
    text = io.TextIOWrapper(stream, encoding="utf-8")
    result = ParseResult()
    if format == "jsonl":
        for line_no, line in enumerate(text, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                if not isinstance(obj, dict):
                    raise FormatError(line_no, "expected a JSON object")
                result.records.append(_coerce_record(obj, line_no))
            except FormatError as exc:
                result.rejections.append(exc)
            except json.JSONDecodeError as exc:
                result.rejections.append(FormatError(line_no, f"invalid JSON: {exc}"))
    elif format == "csv":
        reader = csv.DictReader(text)
        for line_no, row in enumerate(reader, start=2):  # header is line 1
            try:
                cleaned = {k: v for k, v in row.items() if k in RAW_FIELDS and v not in (None, "")}
                result.records.append(_coerce_record(cleaned, line_no))
            except FormatError as exc:
                result.rejections.append(exc)
    else:
        raise DataError(f"unknown victim feed format {format!r}")
    return result


def filter_records(records: list[RawVictimRecord], policy: FilterPolicy) -> list[RawVictimRecord]:
    """Keep records at/after the cutoff from known groups, order preserved."""
    kept = []
    for record in records:
        if record.discovered < policy.cutoff_date:
            continue
        if record.group_name.casefold() not in policy.known_adversaries:
            continue
        if policy.require_description and not record.description.strip():
            continue
        kept.append(record)
    return kept


def enrich_victim(raw: RawVictimRecord, directory: Mapping[str, Mapping]) -> VictimProfile:
    """Fill missing organizational fields from the directory, raw fields winning.

    Raises IncompleteProfile when any required field is still absent; the
    record is expected to be excluded rather than guessed at.
    """
    extra = directory.get(raw.victim_name, {})
    merged = {
        "country": raw.country if raw.country is not None else extra.get("country"),
        "sectors": raw.sectors if raw.sectors is not None else extra.get("sectors"),
        "revenue": raw.revenue if raw.revenue is not None else extra.get("revenue"),
        "employees": raw.employees if raw.employees is not None else extra.get("employees"),
        "org_type": raw.org_type if raw.org_type is not None else extra.get("org_type"),
    }
    missing = [key for key, value in merged.items() if value is None]
    if missing:
        raise IncompleteProfile(raw.victim_name, missing)
    return VictimProfile(
        name=raw.victim_name,
        country=merged["country"],
        sectors=frozenset(merged["sectors"]),
        revenue=merged["revenue"],
        employees=merged["employees"],
        org_type=merged["org_type"],
    )


def join_attacks(
    victims: Iterable[tuple[VictimProfile, str, date]],
    adversaries: Mapping[str, AdversaryProfile],
) -> list[AttackRecord]:
    """One attack record per (victim, group, date) triple; aliases resolve."""
    index = build_adversary_index(adversaries.values())
    records = []
    for victim, group_name, attack_date in victims:
        profile = index.get(group_name.casefold())
        if profile is None:
            raise UnknownAdversary(group_name)
        records.append(
            AttackRecord(
                victim=victim,
                adversary_name=profile.name,
                attack_date=attack_date,
                adversary=profile,
                ewma=None,
                safe=0,
            )
        )
    return records


# --- file IO ------------------------------------------------------------------


def load_directory(path) -> dict[str, dict]:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise DataError(f"enrichment directory {path} must be a JSON object")
    return data


def load_adversaries(path) -> list[AdversaryProfile]:
    """Load adversary profiles from a profile list or a STIX store file."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict) and "objects" in data:
        from .extract.store import StixStore

        return StixStore.from_dict(data).adversaries()
    if isinstance(data, list):
        return [AdversaryProfile.from_dict(item) for item in data]
    raise DataError(f"unrecognized adversary file shape in {path}")


def save_attacks(records: Iterable[AttackRecord], path) -> None:
    payload = [record.to_dict() for record in records]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_attacks(path) -> list[AttackRecord]:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return [AttackRecord.from_dict(item) for item in data]


def ingest_feed(
    victims_path,
    format: str,
    directory_path,
    cutoff: date,
    adversaries_path,
    require_description: bool = True,
) -> tuple[list[AttackRecord], dict]:
    """Full ingest stage: parse -> filter -> enrich -> join.

    Returns the attack records and a rejection report with `parse` and
    `enrich` sections.
    """
    adversaries = load_adversaries(adversaries_path)
    directory = load_directory(directory_path) if directory_path else {}
    with open(victims_path, "rb") as fh:
        parsed = parse_victims(fh, format=format)
    policy = FilterPolicy.for_adversaries(adversaries, cutoff_date=cutoff,
                                          require_description=require_description)
    retained = filter_records(parsed.records, policy)
    adversary_map = {a.name: a for a in adversaries}
    triples = []
    enrich_rejects = []
    for raw in retained:
        try:
            profile = enrich_victim(raw, directory)
        except DataError as exc:
            enrich_rejects.append({"victim": raw.victim_name, "reason": str(exc)})
            continue
        triples.append((profile, raw.group_name, raw.discovered))
    attacks = join_attacks(triples, adversary_map)
    report = {
        "parse": [{"line": r.line_no, "reason": r.reason} for r in parsed.rejections],
        "enrich": enrich_rejects,
        "counts": {
            "parsed": len(parsed.records),
            "retained": len(retained),
            "attacks": len(attacks),
        },
    }
    return attacks, report
