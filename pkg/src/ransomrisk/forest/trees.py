"""Decision tree growing and traversal.

Trees grow depth-first to purity (no depth cap, leaves of one row allowed)
using the selected split kernel. Each node draws a fresh random subset of
ceil(sqrt(width)) candidate columns; if none of them admits a valid split the
search falls back to every column before the node is closed as a leaf. Nodes
store class counts so leaves yield class frequencies and importances can be
recomputed from the structure alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .backend import best_split as default_best_split

LEAF = -1

# Recorder receives (node_row_indices, chosen_column, chosen_threshold).
SplitRecorder = Callable[[np.ndarray, int, float], None]


@dataclass
class Tree:
    column: np.ndarray  # int64, LEAF for leaves
    threshold: np.ndarray  # float64
    left: np.ndarray  # int64 child ids
    right: np.ndarray
    counts: np.ndarray  # (n_nodes, 2) int64 class counts

    @property
    def n_nodes(self) -> int:
        return self.column.size

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf id for every row of X (vectorized level-wise descent)."""
        node = np.zeros(X.shape[0], dtype=np.int64)
        while True:
            cols = self.column[node]
            active = np.nonzero(cols != LEAF)[0]
            if active.size == 0:
                return node
            current = node[active]
            go_left = X[active, self.column[current]] <= self.threshold[current]
            node[active] = np.where(go_left, self.left[current], self.right[current])

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        leaves = self.apply(X)
        counts = self.counts[leaves].astype(np.float64)
        return counts[:, 1] / counts.sum(axis=1)

    def to_lists(self) -> dict:
        return {
            "column": self.column.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "counts": self.counts.tolist(),
        }

    @classmethod
    def from_lists(cls, data: dict) -> "Tree":
        return cls(
            column=np.asarray(data["column"], dtype=np.int64),
            threshold=np.asarray(data["threshold"], dtype=np.float64),
            left=np.asarray(data["left"], dtype=np.int64),
            right=np.asarray(data["right"], dtype=np.int64),
            counts=np.asarray(data["counts"], dtype=np.int64),
        )


def max_features_for(width: int) -> int:
    return max(1, math.ceil(math.sqrt(width)))


def grow_tree(
    X: np.ndarray,
    y: np.ndarray,
    rng: np.random.Generator,
    max_features: Optional[int] = None,
    min_leaf: int = 1,
    max_depth: Optional[int] = None,
    split_fn=None,
    recorder: Optional[SplitRecorder] = None,
) -> Tree:
    """Grow one tree on (X, y); y holds 0/1 labels.

    max_features=None considers every column at every node (no sampling and no
    RNG consumption), which the brute-force oracle tests rely on.
    """
    split_fn = split_fn or default_best_split
    n, width = X.shape
    all_cols = np.arange(width, dtype=np.int64)

    columns: list[int] = []
    thresholds: list[float] = []
    lefts: list[int] = []
    rights: list[int] = []
    counts: list[tuple[int, int]] = []

    def new_node() -> int:
        columns.append(LEAF)
        thresholds.append(0.0)
        lefts.append(LEAF)
        rights.append(LEAF)
        counts.append((0, 0))
        return len(columns) - 1

    root = new_node()
    # Stack of (node_id, row indices, depth); children pushed right-then-left
    # so the left subtree is grown first and RNG consumption is depth-first.
    stack: list[tuple[int, np.ndarray, int]] = [(root, np.arange(n, dtype=np.int64), 0)]
    while stack:
        node_id, idx, depth = stack.pop()
        node_y = y[idx]
        n1 = int(node_y.sum())
        counts[node_id] = (idx.size - n1, n1)
        if n1 == 0 or n1 == idx.size or idx.size < 2 * min_leaf:
            continue
        if max_depth is not None and depth >= max_depth:
            continue
        if max_features is None or max_features >= width:
            cols = all_cols
        else:
            cols = np.sort(rng.choice(width, size=max_features, replace=False)).astype(np.int64)
        found = split_fn(X, y, idx, cols, min_leaf)
        if found is None and cols.size < width:
            found = split_fn(X, y, idx, all_cols, min_leaf)
        if found is None:
            continue
        col, thr = found
        if recorder is not None:
            recorder(idx, col, thr)
        go_left = X[idx, col] <= thr
        left_id = new_node()
        right_id = new_node()
        columns[node_id] = col
        thresholds[node_id] = thr
        lefts[node_id] = left_id
        rights[node_id] = right_id
        stack.append((right_id, idx[~go_left], depth + 1))
        stack.append((left_id, idx[go_left], depth + 1))

    return Tree(
        column=np.asarray(columns, dtype=np.int64),
        threshold=np.asarray(thresholds, dtype=np.float64),
        left=np.asarray(lefts, dtype=np.int64),
        right=np.asarray(rights, dtype=np.int64),
        counts=np.asarray(counts, dtype=np.int64),
    )
