"""STIX-style object synthesis and the embedded document store.

Validated features become a threat-actor object carrying the SKRAM properties
plus reference/relationship objects for each technique, vulnerability, targeted
sector, and targeted country. Object ids are UUIDv5 values derived from a seed
namespace and the object content, so synthesis is deterministic and re-running
extraction is idempotent. The store is a single JSON file.
"""

from __future__ import annotations

import json
import uuid
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from ..errors import DanglingReference, DataError, MissingCoreIdentity, UnknownAdversary
from ..model import AdversaryProfile
from .process import ValidatedFeatures
from .specs import (
    COUNTRY_STANDARD,
    CVE_STANDARD,
    SECTOR_STANDARD,
    TECHNIQUE_STANDARD,
    normalize_standard,
)

OBJECT_TYPES = ("threat-actor", "relationship", "attack-pattern-ref", "vulnerability-ref")


@dataclass(frozen=True)
class StixObject:
    id: str
    type: str
    properties: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.type not in OBJECT_TYPES:
            raise DataError(f"unsupported STIX object type {self.type!r}")
        if not self.id.startswith(f"{self.type}--"):
            raise DataError(f"object id {self.id!r} must carry the {self.type!r} prefix")

    def to_dict(self) -> dict:
        return {"id": self.id, "type": self.type, "properties": self.properties}

    @classmethod
    def from_dict(cls, data: Mapping) -> "StixObject":
        return cls(id=data["id"], type=data["type"], properties=dict(data.get("properties", {})))


def _namespace(seed: int) -> uuid.UUID:
    return uuid.uuid5(uuid.NAMESPACE_URL, f"ransomrisk:{seed}")


def _object_id(ns: uuid.UUID, type_: str, discriminator: str) -> str:
    return f"{type_}--{uuid.uuid5(ns, f'{type_}:{discriminator}')}"


def _first(features: ValidatedFeatures, name: str) -> str | None:
    values = features.accepted(name) if name in features else ()
    return values[0] if values else None


def synthesize_stix(
    features: ValidatedFeatures, adversary_name: str, seed: int = 0
) -> list[StixObject]:
    """Convert validated features for one adversary into store objects.

    Emits one threat-actor plus, per accepted technique/CVE, a reference object
    and a linking relationship, and per accepted sector/country a targeting
    relationship with the value inline.
    """
    if not adversary_name or not adversary_name.strip():
        raise MissingCoreIdentity("adversary name is required to synthesize objects")
    name = adversary_name.strip()
    ns = _namespace(seed)
    actor_id = _object_id(ns, "threat-actor", name.casefold())

    properties: dict = {"name": name}
    aliases = features.accepted("aliases") if "aliases" in features else ()
    if aliases:
        properties["aliases"] = sorted(aliases)
    sophistication = None
    resource_level = None
    motives: list[str] = []
    intents: list[str] = []
    for result in features.features.values():
        std = normalize_standard(result.standard)
        if std == "stix threat actor sophistication" and result.accepted:
            sophistication = result.accepted[0]
        elif std == "stix attack resource level" and result.accepted:
            resource_level = result.accepted[0]
        elif std == "adversary motivation":
            motives.extend(result.accepted)
        elif std == "adversary intent":
            intents.extend(result.accepted)
    if sophistication:
        properties["sophistication"] = sophistication
    if resource_level:
        properties["resource_level"] = resource_level
    if motives or intents:
        properties["goals"] = {}
        if motives:
            properties["goals"]["motive"] = motives[0]
        if intents:
            properties["goals"]["intents"] = sorted(set(intents))

    objects = [StixObject(id=actor_id, type="threat-actor", properties=properties)]

    def _relationship(rel_type: str, target_ref: str | None = None,
                      target_value: dict | None = None) -> StixObject:
        discriminator = f"{actor_id}:{rel_type}:{target_ref or json.dumps(target_value, sort_keys=True)}"
        props: dict = {"relationship_type": rel_type, "source_ref": actor_id}
        if target_ref is not None:
            props["target_ref"] = target_ref
        if target_value is not None:
            props["target_value"] = target_value
        return StixObject(
            id=_object_id(ns, "relationship", discriminator), type="relationship",
            properties=props,
        )

    for result in features.by_standard(TECHNIQUE_STANDARD):
        for ttp in result.accepted:
            ref_id = _object_id(ns, "attack-pattern-ref", ttp)
            objects.append(StixObject(
                id=ref_id, type="attack-pattern-ref", properties={"technique_id": ttp},
            ))
            objects.append(_relationship("uses", target_ref=ref_id))
    for result in features.by_standard(CVE_STANDARD):
        for cve in result.accepted:
            ref_id = _object_id(ns, "vulnerability-ref", cve)
            objects.append(StixObject(
                id=ref_id, type="vulnerability-ref", properties={"cve_id": cve},
            ))
            objects.append(_relationship("targets", target_ref=ref_id))
    for result in features.by_standard(SECTOR_STANDARD):
        for sector in result.accepted:
            objects.append(_relationship("targets", target_value={"industry_sector": sector}))
    for result in features.by_standard(COUNTRY_STANDARD):
        for country in result.accepted:
            objects.append(_relationship("targets", target_value={"country": country}))
    return objects


class StixStore:
    """Embedded, file-backed object store. Insertions are idempotent by id."""

    VERSION = 1

    def __init__(self):
        self._objects: dict[str, StixObject] = {}

    def __len__(self) -> int:
        return len(self._objects)

    def __contains__(self, object_id: str) -> bool:
        return object_id in self._objects

    def get(self, object_id: str) -> StixObject | None:
        return self._objects.get(object_id)

    def insert(self, objects: Iterable[StixObject]) -> list[str]:
        """Insert a batch; relationships may reference ids within the batch.

        Re-inserting an existing id keeps the stored copy. A relationship
        pointing at an id that exists neither in the store nor in the batch
        raises DanglingReference.
        """
        batch = list(objects)
        known = set(self._objects) | {obj.id for obj in batch}
        for obj in batch:
            if obj.type == "relationship":
                for key in ("source_ref", "target_ref"):
                    ref = obj.properties.get(key)
                    if ref is not None and ref not in known:
                        raise DanglingReference(obj.id, ref)
        ids = []
        for obj in batch:
            self._objects.setdefault(obj.id, obj)
            ids.append(obj.id)
        return ids

    def objects_of_type(self, type_: str) -> list[StixObject]:
        return [obj for obj in sorted(self._objects.values(), key=lambda o: o.id)
                if obj.type == type_]

    def _actor_by_name(self, name: str) -> StixObject:
        wanted = name.strip().casefold()
        for actor in self.objects_of_type("threat-actor"):
            names = {str(actor.properties.get("name", "")).casefold()}
            names |= {str(a).casefold() for a in actor.properties.get("aliases", ())}
            if wanted in names:
                return actor
        raise UnknownAdversary(name)

    def query_adversary(self, name: str) -> AdversaryProfile:
        """Reassemble an adversary profile; capability count is the number of
        linked techniques."""
        actor = self._actor_by_name(name)
        ttps = set()
        for rel in self.objects_of_type("relationship"):
            if rel.properties.get("source_ref") != actor.id:
                continue
            target = rel.properties.get("target_ref")
            if target is None:
                continue
            ref = self._objects.get(target)
            if ref is not None and ref.type == "attack-pattern-ref":
                ttps.add(ref.properties["technique_id"])
        goals = actor.properties.get("goals", {})
        return AdversaryProfile(
            name=str(actor.properties["name"]),
            aliases=frozenset(actor.properties.get("aliases", ())),
            sophistication=actor.properties.get("sophistication", "none"),
            motive=goals.get("motive", "other"),
            intent=frozenset(goals.get("intents", ())),
            resource_level=actor.properties.get("resource_level", "individual"),
            capability_count=len(ttps),
            ttps=frozenset(ttps),
        )

    def adversaries(self) -> list[AdversaryProfile]:
        return [
            self.query_adversary(actor.properties["name"])
            for actor in self.objects_of_type("threat-actor")
        ]

    def targeted_values(self, name: str, key: str) -> list[str]:
        """Inline targeting values (key is 'industry_sector' or 'country')."""
        actor = self._actor_by_name(name)
        values = set()
        for rel in self.objects_of_type("relationship"):
            if rel.properties.get("source_ref") != actor.id:
                continue
            target_value = rel.properties.get("target_value") or {}
            if key in target_value:
                values.add(target_value[key])
        return sorted(values)

    def to_dict(self) -> dict:
        return {
            "version": self.VERSION,
            "objects": [obj.to_dict() for obj in sorted(self._objects.values(),
                                                        key=lambda o: o.id)],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "StixStore":
        if data.get("version") != cls.VERSION:
            raise DataError(f"unsupported store version {data.get('version')!r}")
        store = cls()
        non_rels = [StixObject.from_dict(o) for o in data.get("objects", ())]
        store.insert(non_rels)
        return store

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "StixStore":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def store_objects(store: StixStore, objects: Iterable[StixObject]) -> list[str]:
    return store.insert(objects)


def query_adversary(store: StixStore, name: str) -> AdversaryProfile:
    return store.query_adversary(name)
