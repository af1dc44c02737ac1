"""Synthetic dataset augmentation.

Two generators balance the training data. Unsafe replicas copy a real victim,
keep its categorical identity (country, sectors, organization type, adversary
linkage), and jitter revenue, employee count, and activity with zero-centered
Gaussian noise scaled to the observed variability. Safe samples permute a
victim out of its group's observed profile: each feature flips with its
configured probability (country and organization type move outside the group's
observed sets, the numeric features move outside the observed ranges, activity
drops to zero), and the whole pass resamples until at least one field actually
changed.

Every random draw comes from a stream derived from (seed, role, group, victim
index, replica index), so generation is order-independent and byte-for-byte
reproducible.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .dataset import LabeledDataset
from .errors import (
    DataError,
    ExhaustedPool,
    ImbalanceExceeded,
    InsufficientData,
)
from .model import ISO_COUNTRIES, ORG_TYPES, AdversaryProfile, AttackRecord

NOISE_FEATURES = ("revenue", "employees", "ewma")

_UNSAFE_ROLE = 0
_SAFE_ROLE = 1
_ASSEMBLE_ROLE = 2


def _group_key(name: str) -> int:
    digest = hashlib.sha256(name.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def _stream(seed: int, role: int, group: str, victim_index: int, replica_index: int):
    return np.random.default_rng(
        [seed, role, _group_key(group), victim_index, replica_index]
    )


@dataclass(frozen=True)
class NoiseParams:
    """Zero-mean Gaussian noise scales for the perturbable numeric features."""

    sigma: Mapping[str, float]
    mu: float = 0.0

    def __post_init__(self):
        if self.mu != 0.0:
            raise DataError("noise must be centered at zero")
        for name in NOISE_FEATURES:
            if name not in self.sigma:
                raise DataError(f"missing noise scale for {name!r}")
            if not self.sigma[name] > 0:
                raise DataError(f"noise scale for {name!r} must be > 0")


@dataclass(frozen=True)
class FeatureWeights:
    """Per-feature permutation probabilities for the safe-sample generator."""

    country_of_origin: float = 0.8
    number_of_employees: float = 0.3
    revenue: float = 0.7
    company_type: float = 0.3
    ewma: float = 0.95

    def __post_init__(self):
        for name, value in self.as_dict().items():
            if not 0.0 <= value <= 1.0:
                raise DataError(f"weight {name!r} must be in [0, 1], got {value}")

    def as_dict(self) -> dict[str, float]:
        return {
            "country_of_origin": self.country_of_origin,
            "number_of_employees": self.number_of_employees,
            "revenue": self.revenue,
            "company_type": self.company_type,
            "ewma": self.ewma,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "FeatureWeights":
        return cls(**{k: float(v) for k, v in data.items()})


@dataclass(frozen=True)
class VariantMetrics:
    """Observed victim profile of one ransomware group."""

    group: str
    victims: tuple[AttackRecord, ...]
    countries: frozenset[str]
    org_types: frozenset[str]
    revenue_range: tuple[int, int]
    employee_range: tuple[int, int]


@dataclass(frozen=True)
class SynthesisConfig:
    replicas_per_victim: int = 10
    seed: int = 42
    weights: FeatureWeights = field(default_factory=FeatureWeights)
    noise: Optional[NoiseParams] = None
    include_originals: bool = True
    safe_per_victim: Optional[int] = None  # defaults to replicas_per_victim
    retry_cap: int = 64

    def __post_init__(self):
        if self.replicas_per_victim < 1:
            raise DataError("replicas_per_victim must be >= 1")


def derive_noise_params(attacks: Sequence[AttackRecord]) -> NoiseParams:
    """Scale noise to the sample standard deviation of each numeric feature.

    Degenerate features (zero spread) fall back to 10% of the feature mean, or
    1.0 when the mean is zero too, so replication still produces variation.
    """
    if len(attacks) < 2:
        raise InsufficientData(
            f"need at least 2 attack records to derive noise scales, got {len(attacks)}"
        )
    columns = {
        "revenue": [float(a.victim.revenue) for a in attacks],
        "employees": [float(a.victim.employees) for a in attacks],
        "ewma": [_required_ewma(a) for a in attacks],
    }
    sigma = {}
    for name, values in columns.items():
        std = float(np.std(values, ddof=1))
        if std == 0.0:
            mean = float(np.mean(values))
            std = abs(mean) * 0.1 if mean != 0.0 else 1.0
        sigma[name] = std
    return NoiseParams(sigma=sigma)


def _required_ewma(record: AttackRecord) -> float:
    if record.ewma is None:
        raise DataError(
            f"record for {record.victim.name!r} has no activity value stamped"
        )
    return float(record.ewma)


def generate_synthetic_victims(
    attacks: Sequence[AttackRecord],
    adversaries: Mapping[str, AdversaryProfile],
    cfg: SynthesisConfig,
) -> list[AttackRecord]:
    """Replicate each attack record with Gaussian-perturbed numeric features.

    Emits exactly replicas_per_victim * len(attacks) records, all labeled
    unsafe, preserving each source's categorical identity and adversary link.
    """
    noise = cfg.noise or derive_noise_params(attacks)
    out = []
    for victim_index, source in enumerate(attacks):
        adversary = adversaries.get(source.adversary_name, source.adversary)
        base_ewma = _required_ewma(source)
        for replica in range(cfg.replicas_per_victim):
            rng = _stream(cfg.seed, _UNSAFE_ROLE, source.adversary_name, victim_index, replica)
            revenue = max(0, int(round(source.victim.revenue + rng.normal(0.0, noise.sigma["revenue"]))))
            employees = max(0, int(round(source.victim.employees + rng.normal(0.0, noise.sigma["employees"]))))
            ewma = max(0.0, base_ewma + rng.normal(0.0, noise.sigma["ewma"]))
            out.append(
                AttackRecord(
                    victim=replace(source.victim, revenue=revenue, employees=employees),
                    adversary_name=source.adversary_name,
                    attack_date=source.attack_date,
                    adversary=adversary,
                    ewma=ewma,
                    safe=0,
                )
            )
    return out


def build_variant_metrics(attacks: Sequence[AttackRecord]) -> dict[str, VariantMetrics]:
    grouped: dict[str, list[AttackRecord]] = {}
    for record in attacks:
        grouped.setdefault(record.adversary_name, []).append(record)
    metrics = {}
    for group, records in grouped.items():
        revenues = [r.victim.revenue for r in records]
        employees = [r.victim.employees for r in records]
        metrics[group] = VariantMetrics(
            group=group,
            victims=tuple(records),
            countries=frozenset(r.victim.country for r in records),
            org_types=frozenset(r.victim.org_type for r in records),
            revenue_range=(min(revenues), max(revenues)),
            employee_range=(min(employees), max(employees)),
        )
    return metrics


def adjust_numeric_feature(value: float, lo: float, hi: float, rng) -> float:
    """Move a numeric value outside the observed [lo, hi] band.

    Draws a multiplier from [3, 20] or [0.05, 0.33] (fair coin between bands)
    and re-draws up to 16 times while the result stays inside the band; after
    that it falls back to a value guaranteed above the band.
    """
    for _ in range(16):
        if rng.random() < 0.5:
            multiplier = rng.uniform(3.0, 20.0)
        else:
            multiplier = rng.uniform(0.05, 0.33)
        candidate = value * multiplier
        if not lo <= candidate <= hi:
            return candidate
    spread = max(hi - lo, 1.0)
    return hi + spread * rng.uniform(1.0, 5.0)


def _round_outside(value: float, lo: float, hi: float) -> int:
    # Round away from the observed band so integer results stay outside it.
    result = math.ceil(value) if value > hi else math.floor(value)
    return max(0, int(result))


def did_permutate(sample: AttackRecord, original: AttackRecord) -> bool:
    """True iff any permutable feature differs from the original victim's value.

    The permutable set is country, organization type, revenue, employees, and
    activity; sectors deliberately stay out of it.
    """
    return (
        sample.victim.country != original.victim.country
        or sample.victim.org_type != original.victim.org_type
        or sample.victim.revenue != original.victim.revenue
        or sample.victim.employees != original.victim.employees
        or sample.ewma != original.ewma
    )


def _permute_once(
    source: AttackRecord,
    metrics: VariantMetrics,
    country_choices: Sequence[str],
    type_choices: Sequence[str],
    weights: FeatureWeights,
    rng,
) -> AttackRecord:
    victim = source.victim
    country = victim.country
    org_type = victim.org_type
    revenue = victim.revenue
    employees = victim.employees
    ewma = _required_ewma(source)

    if rng.random() < weights.country_of_origin and country_choices:
        country = country_choices[int(rng.integers(len(country_choices)))]
    if rng.random() < weights.company_type and type_choices:
        org_type = type_choices[int(rng.integers(len(type_choices)))]
    if rng.random() < weights.revenue:
        lo, hi = metrics.revenue_range
        revenue = _round_outside(adjust_numeric_feature(float(victim.revenue), lo, hi, rng), lo, hi)
    if rng.random() < weights.number_of_employees:
        lo, hi = metrics.employee_range
        employees = _round_outside(
            adjust_numeric_feature(float(victim.employees), lo, hi, rng), lo, hi
        )
    if rng.random() < weights.ewma:
        ewma = 0.0

    return AttackRecord(
        victim=replace(victim, country=country, org_type=org_type,
                       revenue=revenue, employees=employees),
        adversary_name=source.adversary_name,
        attack_date=source.attack_date,
        adversary=source.adversary,
        ewma=ewma,
        safe=1,
    )


def generate_safe_samples(
    metrics_by_group: Mapping[str, VariantMetrics],
    country_pool: Iterable[str] = ISO_COUNTRIES,
    company_types_pool: Iterable[str] = ORG_TYPES,
    n: int = 10,
    weights: FeatureWeights = FeatureWeights(),
    cfg: SynthesisConfig = SynthesisConfig(),
) -> list[AttackRecord]:
    """Craft out-of-profile samples: n per victim per group, all labeled safe.

    Categorical permutations draw only values the group has never hit; when a
    pool has no such value that feature is skipped and the others stay
    eligible. Each sample resamples the permutation pass until something
    actually changed, up to cfg.retry_cap attempts.
    """
    country_pool = sorted(country_pool)
    company_types_pool = sorted(company_types_pool)
    out = []
    for group in sorted(metrics_by_group):
        metrics = metrics_by_group[group]
        country_choices = [c for c in country_pool if c not in metrics.countries]
        type_choices = [t for t in company_types_pool if t not in metrics.org_types]
        for victim_index, source in enumerate(metrics.victims):
            for replica in range(n):
                rng = _stream(cfg.seed, _SAFE_ROLE, group, victim_index, replica)
                for _ in range(cfg.retry_cap):
                    sample = _permute_once(
                        source, metrics, country_choices, type_choices, weights, rng
                    )
                    if did_permutate(sample, source):
                        out.append(sample)
                        break
                else:
                    raise ExhaustedPool(group, cfg.retry_cap)
    return out


def assemble_dataset(
    unsafe: Sequence[AttackRecord],
    safe: Sequence[AttackRecord],
    cfg: SynthesisConfig,
    tolerance: float = 0.1,
) -> LabeledDataset:
    """Concatenate and seed-shuffle; enforce class balance within tolerance
    (fraction of the total record count)."""
    n_unsafe, n_safe = len(unsafe), len(safe)
    total = n_unsafe + n_safe
    if total == 0:
        raise InsufficientData("cannot assemble an empty dataset")
    if abs(n_unsafe - n_safe) > tolerance * total:
        raise ImbalanceExceeded(n_unsafe, n_safe, tolerance)
    records = list(unsafe) + list(safe)
    rng = np.random.default_rng([cfg.seed, _ASSEMBLE_ROLE])
    order = rng.permutation(total)
    shuffled = tuple(records[i] for i in order)
    return LabeledDataset(records=shuffled, n_unsafe=n_unsafe, n_safe=n_safe, seed=cfg.seed)


def build_training_set(
    attacks: Sequence[AttackRecord],
    cfg: SynthesisConfig,
    country_pool: Iterable[str] = ISO_COUNTRIES,
    company_types_pool: Iterable[str] = ORG_TYPES,
    tolerance: float = 0.1,
) -> LabeledDataset:
    """Full augmentation stage: unsafe replicas + safe samples + assembly."""
    adversaries = {a.adversary_name: a.adversary for a in attacks}
    unsafe = generate_synthetic_victims(attacks, adversaries, cfg)
    if cfg.include_originals:
        unsafe = list(attacks) + unsafe
    metrics = build_variant_metrics(attacks)
    safe = generate_safe_samples(
        metrics,
        country_pool=country_pool,
        company_types_pool=company_types_pool,
        n=cfg.safe_per_victim if cfg.safe_per_victim is not None else cfg.replicas_per_victim,
        weights=cfg.weights,
        cfg=cfg,
    )
    return assemble_dataset(unsafe, safe, cfg, tolerance=tolerance)


def load_weights(path) -> FeatureWeights:
    import json

    with open(path, encoding="utf-8") as fh:
        return FeatureWeights.from_dict(json.load(fh))
