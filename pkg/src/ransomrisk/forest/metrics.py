"""Stratified splitting and binary classification metrics.

The positive class throughout is 'targeted' (safe == 0). The confusion matrix
is taken at the fixed 0.5 probability threshold; zero denominators yield 0
with an explicit flag rather than an exception.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from ..errors import ClassTooSmall, DataError
from .encoding import encode_labels, encode_matrix
from .forest import Forest, predict_proba_matrix

_SPLIT_ROLE = 3
THRESHOLD = 0.5


def split_train_test(
    rows: Sequence[Mapping], fraction: float, seed: int
) -> tuple[list[Mapping], list[Mapping]]:
    """Stratified, exact, seed-deterministic partition (test gets `fraction`)."""
    if not 0.0 < fraction < 1.0:
        raise DataError(f"test fraction must be in (0, 1), got {fraction}")
    labels = [int(row["safe"]) for row in rows]
    by_class: dict[int, list[int]] = {}
    for i, label in enumerate(labels):
        by_class.setdefault(label, []).append(i)
    for label, members in sorted(by_class.items()):
        if len(members) < 2:
            raise ClassTooSmall(label, len(members))
    rng = np.random.default_rng([seed, _SPLIT_ROLE])
    train_idx: list[int] = []
    test_idx: list[int] = []
    for label in sorted(by_class):
        members = np.array(by_class[label])
        members = members[rng.permutation(members.size)]
        n_test = int(np.floor(members.size * fraction + 0.5))
        n_test = min(max(n_test, 1), members.size - 1)
        test_idx.extend(members[:n_test].tolist())
        train_idx.extend(members[n_test:].tolist())
    train_order = rng.permutation(len(train_idx))
    test_order = rng.permutation(len(test_idx))
    train = [rows[train_idx[i]] for i in train_order]
    test = [rows[test_idx[i]] for i in test_order]
    return train, test


@dataclass(frozen=True)
class EvalReport:
    tn: int
    fp: int
    fn: int
    tp: int
    precision: float
    recall: float
    f1: float
    flags: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "confusion": {"tn": self.tn, "fp": self.fp, "fn": self.fn, "tp": self.tp},
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "flags": list(self.flags),
        }


def metrics_from_confusion(tn: int, fp: int, fn: int, tp: int) -> EvalReport:
    flags = []
    if tp + fp > 0:
        precision = tp / (tp + fp)
    else:
        precision, _ = 0.0, flags.append("no_positive_predictions")
    if tp + fn > 0:
        recall = tp / (tp + fn)
    else:
        recall, _ = 0.0, flags.append("no_positive_labels")
    if precision + recall > 0:
        f1 = 2 * precision * recall / (precision + recall)
    else:
        f1, _ = 0.0, flags.append("f1_undefined")
    return EvalReport(tn=tn, fp=fp, fn=fn, tp=tp, precision=precision,
                      recall=recall, f1=f1, flags=tuple(flags))


def evaluate(forest: Forest, rows: Sequence[Mapping]) -> EvalReport:
    if not rows:
        raise DataError("cannot evaluate on an empty test set")
    X, _ = encode_matrix(forest.schema, rows)
    y = encode_labels(rows)
    predicted = predict_proba_matrix(forest, X) >= THRESHOLD
    actual = y.astype(bool)
    tp = int(np.sum(predicted & actual))
    tn = int(np.sum(~predicted & ~actual))
    fp = int(np.sum(predicted & ~actual))
    fn = int(np.sum(~predicted & actual))
    return metrics_from_confusion(tn=tn, fp=fp, fn=fn, tp=tp)
