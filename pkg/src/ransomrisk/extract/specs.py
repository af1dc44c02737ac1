"""Feature prompt specifications.

A spec names one feature to extract and carries the extraction intent, precise
guidance, many-shot examples, chain-of-thought process steps, and the standard
its answers must validate against. Spec files are YAML documents with exactly
those keys; a file may hold one spec or a list of specs.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

import yaml

from ..errors import DataError, EmptyBundle, UnknownStandard
from ..model import (
    validate_country,
    validate_cve,
    validate_intent,
    validate_motive,
    validate_resource_level,
    validate_sector,
    validate_sophistication,
    validate_technique,
)


def _free_text(value: str) -> str:
    text = str(value).strip()
    if not text:
        raise DataError("empty value")
    return text


STANDARDS: dict[str, Callable[[str], str]] = {
    "enumerated stix industry sectors": validate_sector,
    "iso 3166-1 alpha-2": validate_country,
    "mitre att&ck technique ids": validate_technique,
    "cve identifiers": validate_cve,
    "stix threat actor sophistication": validate_sophistication,
    "stix attack resource level": validate_resource_level,
    "adversary motivation": validate_motive,
    "adversary intent": validate_intent,
    "free text": _free_text,
}

# Standards whose accepted values feed specific STIX roles during synthesis.
SECTOR_STANDARD = "enumerated stix industry sectors"
COUNTRY_STANDARD = "iso 3166-1 alpha-2"
TECHNIQUE_STANDARD = "mitre att&ck technique ids"
CVE_STANDARD = "cve identifiers"


def normalize_standard(name: str) -> str:
    return " ".join(name.split()).casefold()


def standard_validator(name: str) -> Callable[[str], str]:
    try:
        return STANDARDS[normalize_standard(name)]
    except KeyError:
        raise UnknownStandard(name) from None


@dataclass(frozen=True)
class FeatureSpec:
    name: str
    intent: str
    guidance: str
    examples: tuple[tuple[str, object], ...] = ()
    process: tuple[str, ...] = ()
    standard: str = "free text"

    def __post_init__(self):
        if not self.name:
            raise DataError("feature spec needs a non-empty name")
        standard_validator(self.standard)  # must be registered

    @property
    def validator(self) -> Callable[[str], str]:
        return standard_validator(self.standard)

    @classmethod
    def from_dict(cls, data: dict) -> "FeatureSpec":
        examples = []
        for example in data.get("examples", ()) or ():
            if "sample" not in example or "answer" not in example:
                raise DataError(f"example in spec {data.get('name')!r} needs sample and answer")
            examples.append((str(example["sample"]), example["answer"]))
        return cls(
            name=str(data.get("name", "")),
            intent=str(data.get("intent", "")),
            guidance=str(data.get("guidance", "")),
            examples=tuple(examples),
            process=tuple(str(step) for step in data.get("process", ()) or ()),
            standard=str(data.get("standard", "free text")),
        )


def load_spec_file(path) -> list[FeatureSpec]:
    with open(path, encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    if data is None:
        return []
    if isinstance(data, dict):
        data = [data]
    return [FeatureSpec.from_dict(item) for item in data]


def load_bundle(directory) -> list[FeatureSpec]:
    """Load every spec file in a directory (sorted) into one prompt bundle."""
    paths = sorted(p for p in Path(directory).iterdir() if p.suffix in (".yaml", ".yml"))
    specs: list[FeatureSpec] = []
    for path in paths:
        specs.extend(load_spec_file(path))
    if not specs:
        raise EmptyBundle(f"no feature specs found under {directory}")
    seen = set()
    for spec in specs:
        if spec.name in seen:
            raise DataError(f"duplicate feature name {spec.name!r} in prompt bundle")
        seen.add(spec.name)
    return specs


def bundle_names(specs: Iterable[FeatureSpec]) -> list[str]:
    return [spec.name for spec in specs]
