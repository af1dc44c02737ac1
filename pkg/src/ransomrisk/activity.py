"""Per-group attack activity smoothing.

Each ransomware group's monthly attack counts are smoothed with an
exponentially weighted moving average, V_t = lam * V_{t-1} + (1 - lam) * x_t,
so a month without observations decays the average by the factor lam. The
computed table is queried at any month: inside the observed series it returns
the stored value, past the end it keeps decaying, before the start it is 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import date
from typing import Iterable, Mapping

from .errors import DataError, UnknownGroup
from .model import AttackRecord


def month_index(d: date) -> int:
    return d.year * 12 + (d.month - 1)


def parse_month(text: str) -> int:
    """Parse 'YYYY-MM' into a month index."""
    try:
        year, month = text.split("-")
        d = date(int(year), int(month), 1)
    except ValueError as exc:
        raise DataError(f"bad month {text!r}, expected YYYY-MM") from exc
    return month_index(d)


def format_month(index: int) -> str:
    return f"{index // 12:04d}-{index % 12 + 1:02d}"


@dataclass(frozen=True)
class MonthlySeries:
    """Contiguous per-month attack counts for one group, zeros made explicit."""

    group: str
    start_month: int
    counts: tuple[int, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.counts):
            raise DataError(f"negative monthly count in series for {self.group!r}")


@dataclass(frozen=True)
class EwmaParams:
    lam: float = 0.2
    initial: str = "zero-prior"  # V_0 = (1-lam)*x_0; "first-count" uses V_0 = x_0

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise DataError(f"lambda must be in [0, 1], got {self.lam}")
        if self.initial not in ("zero-prior", "first-count"):
            raise DataError(f"unknown initialization rule {self.initial!r}")


def bucket_by_month(attacks: Iterable[AttackRecord]) -> dict[str, MonthlySeries]:
    """Materialize each group's monthly counts between its first and last attack."""
    by_group: dict[str, list[int]] = {}
    for record in attacks:
        by_group.setdefault(record.adversary_name, []).append(month_index(record.attack_date))
    series = {}
    for group, months in by_group.items():
        start, end = min(months), max(months)
        counts = [0] * (end - start + 1)
        for m in months:
            counts[m - start] += 1
        series[group] = MonthlySeries(group=group, start_month=start, counts=tuple(counts))
    return series


def compute_ewma(series: MonthlySeries, params: EwmaParams = EwmaParams()) -> list[float]:
    if not series.counts:
        raise DataError(f"empty monthly series for {series.group!r}")
    lam = params.lam
    if params.initial == "zero-prior":
        values = [(1.0 - lam) * series.counts[0]]
    else:
        values = [float(series.counts[0])]
    for x in series.counts[1:]:
        values.append(lam * values[-1] + (1.0 - lam) * x)
    return values


@dataclass(frozen=True)
class EwmaTable:
    """Computed smoothing values per group, with out-of-series query rules."""

    lam: float
    series: Mapping[str, tuple[int, tuple[float, ...]]] = field(default_factory=dict)

    def groups(self) -> list[str]:
        return sorted(self.series)

    def value_at(self, group: str, month: int | str) -> float:
        if group not in self.series:
            raise UnknownGroup(group)
        if isinstance(month, str):
            month = parse_month(month)
        start, values = self.series[group]
        if month < start:
            return 0.0
        offset = month - start
        if offset < len(values):
            return values[offset]
        return values[-1] * self.lam ** (offset - len(values) + 1)

    def to_dict(self) -> dict:
        groups = {}
        for group, (start, values) in self.series.items():
            groups[group] = [
                {"month": format_month(start + i), "v": v} for i, v in enumerate(values)
            ]
        return {"lambda": self.lam, "groups": groups}

    @classmethod
    def from_dict(cls, data: Mapping) -> "EwmaTable":
        series = {}
        for group, entries in data["groups"].items():
            if not entries:
                continue
            start = parse_month(entries[0]["month"])
            series[group] = (start, tuple(float(e["v"]) for e in entries))
        return cls(lam=float(data["lambda"]), series=series)


def build_table(attacks: Iterable[AttackRecord], params: EwmaParams = EwmaParams()) -> EwmaTable:
    series = {}
    for group, monthly in bucket_by_month(attacks).items():
        series[group] = (monthly.start_month, tuple(compute_ewma(monthly, params)))
    return EwmaTable(lam=params.lam, series=series)


def ewma_at(table: EwmaTable, group: str, month: int | str) -> float:
    return table.value_at(group, month)


def stamp_ewma(attacks: Iterable[AttackRecord], table: EwmaTable) -> list[AttackRecord]:
    """Attach each record's group activity at its attack month."""
    return [
        record.with_ewma(table.value_at(record.adversary_name, month_index(record.attack_date)))
        for record in attacks
    ]


def save_table(table: EwmaTable, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(table.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_table(path) -> EwmaTable:
    with open(path, encoding="utf-8") as fh:
        return EwmaTable.from_dict(json.load(fh))
