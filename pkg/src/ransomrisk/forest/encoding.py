"""Design-matrix encoding.

Sectors and intents are multi-label binarized; country, organization type,
sophistication, motive, and resource level are one-hot; revenue, employees,
activity, and capability count pass through as numerics. Category tables are
frozen when the schema is fitted; categories unseen at fit time encode to an
all-zero block and are tallied in a transform report.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from ..errors import DataError, EncodingFailure

MULTI_LABEL_FIELDS = ("sectors", "intent")
ONE_HOT_FIELDS = ("country", "org_type", "sophistication", "motive", "resource_level")
NUMERIC_FIELDS = ("revenue", "employees", "ewma", "capability_count")


@dataclass(frozen=True)
class EncodingSchema:
    categories: Mapping[str, tuple[str, ...]]  # field -> frozen category table

    def __post_init__(self):
        for name in MULTI_LABEL_FIELDS + ONE_HOT_FIELDS:
            if name not in self.categories:
                raise DataError(f"schema lacks a category table for {name!r}")

    @property
    def columns(self) -> list[str]:
        names = []
        for fname in MULTI_LABEL_FIELDS + ONE_HOT_FIELDS:
            names.extend(f"{fname}={value}" for value in self.categories[fname])
        names.extend(NUMERIC_FIELDS)
        return names

    @property
    def width(self) -> int:
        return sum(len(self.categories[f]) for f in MULTI_LABEL_FIELDS + ONE_HOT_FIELDS) + len(
            NUMERIC_FIELDS
        )

    def group_of(self, column: str) -> str:
        """Source field a column belongs to (for pooled importances)."""
        return column.split("=", 1)[0]

    def to_dict(self) -> dict:
        return {name: list(values) for name, values in self.categories.items()}

    @classmethod
    def from_dict(cls, data: Mapping) -> "EncodingSchema":
        return cls(categories={name: tuple(values) for name, values in data.items()})


@dataclass
class TransformReport:
    unknown: Counter = field(default_factory=Counter)

    def note(self, fname: str, value: str) -> None:
        self.unknown[(fname, value)] += 1

    @property
    def total_unknown(self) -> int:
        return sum(self.unknown.values())


def fit_schema(rows: Sequence[Mapping]) -> EncodingSchema:
    """Freeze sorted category tables from the dataset."""
    if not rows:
        raise DataError("cannot fit an encoding schema on an empty dataset")
    categories: dict[str, set[str]] = {
        name: set() for name in MULTI_LABEL_FIELDS + ONE_HOT_FIELDS
    }
    for row in rows:
        for name in MULTI_LABEL_FIELDS:
            categories[name].update(row[name])
        for name in ONE_HOT_FIELDS:
            categories[name].add(row[name])
    return EncodingSchema(
        categories={name: tuple(sorted(values)) for name, values in categories.items()}
    )


def encode_row(schema: EncodingSchema, row: Mapping, report: TransformReport | None = None) -> np.ndarray:
    out = np.zeros(schema.width, dtype=np.float64)
    offset = 0
    try:
        for fname in MULTI_LABEL_FIELDS:
            table = schema.categories[fname]
            index = {value: i for i, value in enumerate(table)}
            for value in row[fname]:
                i = index.get(value)
                if i is None:
                    if report is not None:
                        report.note(fname, value)
                    continue
                out[offset + i] = 1.0
            offset += len(table)
        for fname in ONE_HOT_FIELDS:
            table = schema.categories[fname]
            value = row[fname]
            try:
                out[offset + table.index(value)] = 1.0
            except ValueError:
                if report is not None:
                    report.note(fname, value)
            offset += len(table)
        for fname in NUMERIC_FIELDS:
            out[offset] = float(row[fname])
            offset += 1
    except (KeyError, TypeError, ValueError) as exc:
        raise EncodingFailure(f"cannot encode row: {exc}") from exc
    return out


def encode_matrix(
    schema: EncodingSchema, rows: Sequence[Mapping]
) -> tuple[np.ndarray, TransformReport]:
    report = TransformReport()
    X = np.empty((len(rows), schema.width), dtype=np.float64)
    for i, row in enumerate(rows):
        X[i] = encode_row(schema, row, report)
    return np.ascontiguousarray(X), report


def encode_labels(rows: Iterable[Mapping]) -> np.ndarray:
    """Class 1 is 'targeted' (safe == 0); class 0 is 'safe'."""
    return np.array([1 - int(row["safe"]) for row in rows], dtype=np.int8)
