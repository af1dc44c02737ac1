"""Response processing: serialize multi-part replies and validate features.

Serialization concatenates parts in index order, strips code-fence wrappers,
and requires the result to parse as one JSON document. Validation runs every
reported value through its feature's standard; anything invalid lands in the
rejection list with a reason instead of reaching the dataset.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from ..errors import DataError, NonContiguousParts, UnparseableUnifiedResponse
from .client import RawResponse
from .specs import FeatureSpec

_FENCE_OPEN = re.compile(r"^\s*```[a-zA-Z0-9_-]*\s*\n")
_FENCE_CLOSE = re.compile(r"\n?\s*```\s*$")


def strip_code_fences(text: str) -> str:
    text = _FENCE_OPEN.sub("", text)
    return _FENCE_CLOSE.sub("", text)


def serialize_responses(parts: list[RawResponse]) -> str:
    """Join parts into the unified reply text; must parse as a JSON document."""
    if not parts:
        raise NonContiguousParts([])
    indices = [p.part_index for p in parts]
    if indices != list(range(len(parts))):
        raise NonContiguousParts(indices)
    unified = strip_code_fences("".join(p.text for p in parts)).strip()
    try:
        json.loads(unified)
    except json.JSONDecodeError as exc:
        raise UnparseableUnifiedResponse(f"unified response is not JSON: {exc}") from exc
    return unified


@dataclass(frozen=True)
class FeatureResult:
    """Validated outcome for one requested feature."""

    name: str
    standard: str
    accepted: tuple[str, ...] = ()
    rationale: str = ""
    rejections: tuple[tuple[str, str], ...] = ()
    missing: bool = False


@dataclass
class ValidatedFeatures:
    features: dict[str, FeatureResult] = field(default_factory=dict)

    def __getitem__(self, name: str) -> FeatureResult:
        return self.features[name]

    def __contains__(self, name: str) -> bool:
        return name in self.features

    def accepted(self, name: str) -> tuple[str, ...]:
        result = self.features.get(name)
        return result.accepted if result else ()

    def by_standard(self, standard: str) -> list[FeatureResult]:
        from .specs import normalize_standard

        return [
            r for r in self.features.values()
            if normalize_standard(r.standard) == normalize_standard(standard)
        ]

    def rejection_report(self) -> dict:
        return {
            name: [list(item) for item in result.rejections]
            for name, result in self.features.items()
            if result.rejections
        }


def _iter_values(value: object) -> list[object]:
    if value is None:
        return []
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]


def validate_features(unified: Mapping | str, specs: Iterable[FeatureSpec]) -> ValidatedFeatures:
    """Validate a parsed unified response against each spec's standard.

    Features absent from the response are recorded as missing, never invented.
    Total: bad values become rejections, nothing raises per value.
    """
    if isinstance(unified, str):
        try:
            unified = json.loads(unified)
        except json.JSONDecodeError as exc:
            raise UnparseableUnifiedResponse(str(exc)) from exc
    if not isinstance(unified, Mapping):
        raise UnparseableUnifiedResponse("unified response must be a JSON object")

    out = ValidatedFeatures()
    for spec in specs:
        entry = unified.get(spec.name)
        if entry is None:
            out.features[spec.name] = FeatureResult(
                name=spec.name, standard=spec.standard, missing=True
            )
            continue
        if isinstance(entry, Mapping):
            raw_value = entry.get("value")
            rationale = str(entry.get("rationale", ""))
        else:
            raw_value = entry
            rationale = ""
        accepted: list[str] = []
        rejections: list[tuple[str, str]] = []
        for item in _iter_values(raw_value):
            try:
                validated = spec.validator(str(item))
            except DataError as exc:
                rejections.append((str(item), str(exc)))
                continue
            if validated not in accepted:
                accepted.append(validated)
        out.features[spec.name] = FeatureResult(
            name=spec.name,
            standard=spec.standard,
            accepted=tuple(accepted),
            rationale=rationale,
            rejections=tuple(rejections),
        )
    return out
