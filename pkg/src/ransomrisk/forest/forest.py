"""Random-forest classifier: training, scoring, importances, serialization.

Every tree trains on a bootstrap resample drawn from its own RNG stream
(seeded by [config.seed, tree_index]), so a (dataset, config) pair fully
determines the forest. Predictions average each tree's leaf class-1 frequency.
Model files are versioned JSON carrying the encoding schema, configuration,
and node arrays; round-tripping reproduces predictions exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from ..errors import CorruptModel, DataError, DegenerateData, VersionMismatch
from .encoding import EncodingSchema, encode_labels, encode_matrix, encode_row, fit_schema
from .trees import Tree, grow_tree, max_features_for

MODEL_FORMAT = "ransomrisk/forest"
MODEL_VERSION = 1


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 100
    seed: int = 42
    max_features_rule: str = "sqrt"
    min_samples_leaf: int = 1
    max_depth: int | None = None
    split_criterion: str = "gini"
    bootstrap: bool = True
    test_fraction: float = 0.2

    def __post_init__(self):
        if self.n_trees < 1:
            raise DataError("n_trees must be >= 1")
        if not 0.0 < self.test_fraction < 1.0:
            raise DataError("test_fraction must be in (0, 1)")
        if self.split_criterion != "gini":
            raise DataError(f"unsupported split criterion {self.split_criterion!r}")
        if self.max_features_rule not in ("sqrt", "all"):
            raise DataError(f"unsupported max_features rule {self.max_features_rule!r}")

    def to_dict(self) -> dict:
        return {
            "n_trees": self.n_trees,
            "seed": self.seed,
            "max_features_rule": self.max_features_rule,
            "min_samples_leaf": self.min_samples_leaf,
            "max_depth": self.max_depth,
            "split_criterion": self.split_criterion,
            "bootstrap": self.bootstrap,
            "test_fraction": self.test_fraction,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "ForestConfig":
        return cls(**dict(data))


@dataclass
class Forest:
    config: ForestConfig
    schema: EncodingSchema
    trees: list[Tree]
    trained_on: dict = field(default_factory=dict)  # row/class counts, audit only


def train_matrix(X: np.ndarray, y: np.ndarray, config: ForestConfig) -> list[Tree]:
    n, width = X.shape
    classes = np.unique(y)
    if classes.size < 2:
        raise DegenerateData("training data contains a single class")
    if bool(np.all(X == X[0])):
        raise DegenerateData("all training rows are identical")
    if config.max_features_rule == "sqrt":
        k = max_features_for(width)
    else:
        k = width
    trees = []
    for t in range(config.n_trees):
        rng = np.random.default_rng([config.seed, t])
        if config.bootstrap:
            sample = rng.integers(0, n, size=n)
            Xt = np.ascontiguousarray(X[sample])
            yt = y[sample]
        else:
            Xt, yt = X, y
        trees.append(
            grow_tree(
                Xt,
                yt,
                rng,
                max_features=k if k < width else None,
                min_leaf=config.min_samples_leaf,
                max_depth=config.max_depth,
            )
        )
    return trees


def train(rows: Sequence[Mapping], config: ForestConfig) -> Forest:
    """Fit the encoding schema on the training rows and grow the ensemble."""
    schema = fit_schema(rows)
    X, _ = encode_matrix(schema, rows)
    y = encode_labels(rows)
    trees = train_matrix(X, y, config)
    trained_on = {
        "rows": len(rows),
        "targeted": int(y.sum()),
        "safe": int(len(rows) - y.sum()),
        "width": schema.width,
    }
    return Forest(config=config, schema=schema, trees=trees, trained_on=trained_on)


def predict_proba_matrix(forest: Forest, X: np.ndarray) -> np.ndarray:
    """Probability of the targeted class, averaged over trees."""
    total = np.zeros(X.shape[0], dtype=np.float64)
    for tree in forest.trees:
        total += tree.predict_proba(X)
    return total / len(forest.trees)


def predict_proba(forest: Forest, row: Mapping) -> float:
    x = encode_row(forest.schema, row).reshape(1, -1)
    return float(predict_proba_matrix(forest, x)[0])


def _node_gini(counts: np.ndarray) -> np.ndarray:
    totals = counts.sum(axis=1).astype(np.float64)
    with np.errstate(invalid="ignore"):
        g = 1.0 - (counts.astype(np.float64) ** 2).sum(axis=1) / totals**2
    return np.nan_to_num(g)


def feature_importance(forest: Forest) -> np.ndarray:
    """Mean decrease in Gini impurity per column, normalized to sum to 1."""
    width = forest.schema.width
    raw = np.zeros(width, dtype=np.float64)
    for tree in forest.trees:
        internal = np.nonzero(tree.column >= 0)[0]
        if internal.size == 0:
            continue
        gini = _node_gini(tree.counts)
        totals = tree.counts.sum(axis=1).astype(np.float64)
        for node in internal:
            left, right = tree.left[node], tree.right[node]
            decrease = (
                totals[node] * gini[node]
                - totals[left] * gini[left]
                - totals[right] * gini[right]
            )
            raw[tree.column[node]] += decrease
    total = raw.sum()
    if total > 0:
        raw /= total
    return raw


def grouped_importance(forest: Forest) -> dict[str, float]:
    """Importances pooled by source field (all sector columns together, etc.)."""
    importances = feature_importance(forest)
    grouped: dict[str, float] = {}
    for name, value in zip(forest.schema.columns, importances):
        key = forest.schema.group_of(name)
        grouped[key] = grouped.get(key, 0.0) + float(value)
    return grouped


def serialize_model(forest: Forest) -> bytes:
    payload = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "config": forest.config.to_dict(),
        "schema": forest.schema.to_dict(),
        "trained_on": forest.trained_on,
        "trees": [tree.to_lists() for tree in forest.trees],
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")


def deserialize_model(data: bytes) -> Forest:
    try:
        payload = json.loads(data.decode("utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CorruptModel(f"model file does not parse: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("format") != MODEL_FORMAT:
        raise CorruptModel("not a forest model file")
    if payload.get("version") != MODEL_VERSION:
        raise VersionMismatch(payload.get("version"), MODEL_VERSION)
    try:
        return Forest(
            config=ForestConfig.from_dict(payload["config"]),
            schema=EncodingSchema.from_dict(payload["schema"]),
            trees=[Tree.from_lists(t) for t in payload["trees"]],
            trained_on=dict(payload.get("trained_on", {})),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptModel(f"model file is incomplete: {exc}") from exc


def save_model(forest: Forest, path) -> None:
    with open(path, "wb") as fh:
        fh.write(serialize_model(forest))
        fh.write(b"\n")


def load_model(path) -> Forest:
    with open(path, "rb") as fh:
        return deserialize_model(fh.read().rstrip(b"\n"))
