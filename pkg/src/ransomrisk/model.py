"""Domain types, controlled vocabularies, and validators shared by every stage.

Vocabularies are embedded as plain-text data files (one value per line, `#`
comments allowed) so validation is deterministic and offline. ATT&CK and CVE
identifiers are validated in two tiers: the syntactic pattern is always
enforced, and an existence check against a snapshot id list kicks in only when
such a snapshot is supplied.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from datetime import date
from importlib import resources
from typing import Iterable, Mapping, Optional

from .errors import (
    InvalidProfile,
    MalformedCveId,
    MalformedTechniqueId,
    UnknownCountry,
    UnknownSector,
    UnknownVocabValue,
)


def _load_vocab(name: str) -> tuple[str, ...]:
    text = resources.files(__package__).joinpath(f"vocab/{name}.txt").read_text("utf-8")
    values = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            values.append(line)
    return tuple(values)


ISO_COUNTRIES = frozenset(_load_vocab("iso3166_alpha2"))
STIX_SECTORS = frozenset(_load_vocab("stix_industry_sectors"))
ORG_TYPES = frozenset(_load_vocab("org_types"))
MOTIVES = frozenset(_load_vocab("motives"))
INTENTS = frozenset(_load_vocab("intents"))
SOPHISTICATION_LEVELS = frozenset(_load_vocab("sophistication"))
RESOURCE_LEVELS = frozenset(_load_vocab("resource_levels"))

TECHNIQUE_PATTERN = re.compile(r"^T\d{4}(\.\d{3})?$")
CVE_PATTERN = re.compile(r"^CVE-\d{4}-\d{4,}$")


# --- validators ---------------------------------------------------------------


def validate_country(code: str) -> str:
    """Normalize to uppercase and check membership in the ISO 3166-1 table."""
    normalized = code.strip().upper()
    if normalized not in ISO_COUNTRIES:
        raise UnknownCountry(code)
    return normalized


def validate_sector(value: str) -> str:
    """Normalize (lowercase, spaces/underscores to hyphens) and check the STIX vocabulary."""
    normalized = re.sub(r"[\s_]+", "-", value.strip().lower())
    if normalized not in STIX_SECTORS:
        raise UnknownSector(value)
    return normalized


def _validate_enum(value: str, table: frozenset[str], vocab: str) -> str:
    normalized = re.sub(r"[\s_]+", "-", value.strip().lower())
    if normalized not in table:
        raise UnknownVocabValue(vocab, value)
    return normalized


def validate_org_type(value: str) -> str:
    return _validate_enum(value, ORG_TYPES, "organization type")


def validate_motive(value: str) -> str:
    return _validate_enum(value, MOTIVES, "adversary motive")


def validate_intent(value: str) -> str:
    return _validate_enum(value, INTENTS, "adversary intent")


def validate_sophistication(value: str) -> str:
    return _validate_enum(value, SOPHISTICATION_LEVELS, "sophistication level")


def validate_resource_level(value: str) -> str:
    return _validate_enum(value, RESOURCE_LEVELS, "resource level")


def validate_technique(tid: str, known: Optional[frozenset[str]] = None) -> str:
    """Pattern-check an ATT&CK technique id; verify existence when a snapshot is given."""
    normalized = tid.strip().upper()
    if not TECHNIQUE_PATTERN.match(normalized):
        raise MalformedTechniqueId(tid)
    if known is not None and normalized not in known:
        raise MalformedTechniqueId(tid, "not present in the bundled ATT&CK snapshot")
    return normalized


def validate_cve(cid: str, known: Optional[frozenset[str]] = None) -> str:
    normalized = cid.strip().upper()
    if not CVE_PATTERN.match(normalized):
        raise MalformedCveId(cid)
    if known is not None and normalized not in known:
        raise MalformedCveId(cid, "not present in the bundled CVE snapshot")
    return normalized


def load_id_snapshot(path) -> frozenset[str]:
    """Load an identifier snapshot file (one id per line, `#` comments)."""
    values = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                values.append(line.upper())
    return frozenset(values)


# --- domain types --------------------------------------------------------------


@dataclass(frozen=True)
class VictimProfile:
    """Static organizational attributes of one (potential) victim."""

    name: str
    country: str
    sectors: frozenset[str]
    revenue: int
    employees: int
    org_type: str

    def __post_init__(self):
        if not self.name:
            raise InvalidProfile("victim name must be non-empty")
        object.__setattr__(self, "country", validate_country(self.country))
        if not self.sectors:
            raise InvalidProfile(f"victim {self.name!r} needs at least one sector")
        object.__setattr__(
            self, "sectors", frozenset(validate_sector(s) for s in self.sectors)
        )
        object.__setattr__(self, "org_type", validate_org_type(self.org_type))
        if int(self.revenue) < 0:
            raise InvalidProfile(f"victim {self.name!r}: revenue must be >= 0")
        if int(self.employees) < 0:
            raise InvalidProfile(f"victim {self.name!r}: employees must be >= 0")
        object.__setattr__(self, "revenue", int(self.revenue))
        object.__setattr__(self, "employees", int(self.employees))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "country": self.country,
            "sectors": sorted(self.sectors),
            "revenue": self.revenue,
            "employees": self.employees,
            "org_type": self.org_type,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "VictimProfile":
        return cls(
            name=data["name"],
            country=data["country"],
            sectors=frozenset(data["sectors"]),
            revenue=data["revenue"],
            employees=data["employees"],
            org_type=data["org_type"],
        )


@dataclass(frozen=True)
class AdversaryProfile:
    """SKRAM/STIX threat-actor attributes plus the known technique set."""

    name: str
    aliases: frozenset[str] = frozenset()
    sophistication: str = "none"
    motive: str = "other"
    intent: frozenset[str] = frozenset()
    resource_level: str = "individual"
    capability_count: int = 0
    ttps: frozenset[str] = frozenset()

    def __post_init__(self):
        if not self.name:
            raise InvalidProfile("adversary name must be non-empty")
        object.__setattr__(self, "aliases", frozenset(self.aliases))
        object.__setattr__(self, "sophistication", validate_sophistication(self.sophistication))
        object.__setattr__(self, "motive", validate_motive(self.motive))
        object.__setattr__(self, "intent", frozenset(validate_intent(i) for i in self.intent))
        object.__setattr__(self, "resource_level", validate_resource_level(self.resource_level))
        object.__setattr__(self, "ttps", frozenset(validate_technique(t) for t in self.ttps))
        if int(self.capability_count) < 0:
            raise InvalidProfile(f"adversary {self.name!r}: capability_count must be >= 0")
        object.__setattr__(self, "capability_count", int(self.capability_count))
        if self.ttps and self.capability_count != len(self.ttps):
            raise InvalidProfile(
                f"adversary {self.name!r}: capability_count {self.capability_count} "
                f"!= {len(self.ttps)} listed techniques"
            )

    def known_names(self) -> frozenset[str]:
        """Casefolded primary name plus aliases, for alias-aware matching."""
        return frozenset({self.name.casefold(), *(a.casefold() for a in self.aliases)})

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "aliases": sorted(self.aliases),
            "sophistication": self.sophistication,
            "motive": self.motive,
            "intent": sorted(self.intent),
            "resource_level": self.resource_level,
            "capability_count": self.capability_count,
            "ttps": sorted(self.ttps),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "AdversaryProfile":
        return cls(
            name=data["name"],
            aliases=frozenset(data.get("aliases", ())),
            sophistication=data.get("sophistication", "none"),
            motive=data.get("motive", "other"),
            intent=frozenset(data.get("intent", ())),
            resource_level=data.get("resource_level", "individual"),
            capability_count=data.get("capability_count", 0),
            ttps=frozenset(data.get("ttps", ())),
        )


@dataclass(frozen=True)
class AttackRecord:
    """One (victim, adversary, date) observation carrying the smoothed activity
    at attack time and the safe/unsafe training label (0 = attacked)."""

    victim: VictimProfile
    adversary_name: str
    attack_date: date
    adversary: AdversaryProfile
    ewma: Optional[float] = None
    safe: int = 0

    def __post_init__(self):
        if self.ewma is not None and not self.ewma >= 0:
            raise InvalidProfile(f"ewma must be >= 0, got {self.ewma}")
        if self.safe not in (0, 1):
            raise InvalidProfile(f"safe label must be 0 or 1, got {self.safe}")

    def with_ewma(self, value: float) -> "AttackRecord":
        return replace(self, ewma=float(value))

    def to_dict(self) -> dict:
        return {
            "victim": self.victim.to_dict(),
            "adversary_name": self.adversary_name,
            "attack_date": self.attack_date.isoformat(),
            "ewma": self.ewma,
            "adversary": self.adversary.to_dict(),
            "safe": self.safe,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "AttackRecord":
        return cls(
            victim=VictimProfile.from_dict(data["victim"]),
            adversary_name=data["adversary_name"],
            attack_date=date.fromisoformat(data["attack_date"]),
            adversary=AdversaryProfile.from_dict(data["adversary"]),
            ewma=data.get("ewma"),
            safe=data.get("safe", 0),
        )


def build_adversary_index(adversaries: Iterable[AdversaryProfile]) -> dict[str, AdversaryProfile]:
    """Casefolded name/alias -> profile lookup used for alias resolution."""
    index: dict[str, AdversaryProfile] = {}
    for profile in adversaries:
        for key in profile.known_names():
            index.setdefault(key, profile)
    return index
