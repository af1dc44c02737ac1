"""Confidence-to-risk-level mapping: a 10-point scale from None to Extremely High."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import OutOfRange

RISK_LABELS = (
    "None",
    "Minimal",
    "Very Low",
    "Low",
    "Moderately Low",
    "Moderate",
    "Moderately High",
    "High",
    "Very High",
    "Extremely High",
)


def risk_level(confidence: float) -> tuple[int, str]:
    """Bucket a [0, 1] confidence: level = min(floor(confidence * 10), 9)."""
    if not isinstance(confidence, (int, float)) or math.isnan(confidence):
        raise OutOfRange(confidence)
    if confidence < 0.0 or confidence > 1.0:
        raise OutOfRange(confidence)
    level = min(int(math.floor(confidence * 10.0)), 9)
    return level, RISK_LABELS[level]


@dataclass(frozen=True)
class RiskAssessment:
    """One scored (organization, group) pair."""

    group: str
    confidence: float
    level: int
    label: str
    top_features: tuple[tuple[str, float], ...] = ()

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "confidence": self.confidence,
            "level": self.level,
            "label": self.label,
            "top_features": [
                {"feature": name, "importance": value} for name, value in self.top_features
            ],
        }

    @classmethod
    def from_confidence(
        cls, group: str, confidence: float,
        top_features: tuple[tuple[str, float], ...] = (),
    ) -> "RiskAssessment":
        level, label = risk_level(confidence)
        return cls(group=group, confidence=confidence, level=level, label=label,
                   top_features=top_features)
