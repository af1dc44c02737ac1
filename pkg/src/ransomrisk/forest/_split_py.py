"""Pure-Python (numpy) best-split kernel.

Finds the (column, threshold) minimizing weighted child Gini impurity over the
given candidate columns. The score is compared exactly: minimizing weighted
Gini is equivalent to maximizing S_l/n_l + S_r/n_r where S is the sum of
squared class counts, so candidates are ranked as integer fractions. A float
pre-pass narrows each column to the few candidates within rounding distance of
its maximum, and exact integer comparison picks the winner, tie-breaking on
lowest column index then lowest threshold. Thresholds are midpoints between
consecutive distinct sorted values.
"""

from __future__ import annotations

import numpy as np


def best_split(
    X: np.ndarray,
    y: np.ndarray,
    idx: np.ndarray,
    cols: np.ndarray,
    min_leaf: int = 1,
) -> tuple[int, float] | None:
    """Return (column, threshold) for the best valid split, or None.

    `cols` must be sorted ascending; rows X[idx] with labels y[idx] form the
    node. A valid split leaves at least min_leaf rows on each side.
    """
    n = idx.size
    if n < 2 * min_leaf:
        return None
    yv = y[idx].astype(np.int64)

    best_num = -1  # running best as an exact fraction best_num / best_den
    best_den = 1
    best_col = -1
    best_thr = 0.0

    for c in cols:
        v = X[idx, c]
        order = np.argsort(v)
        sv = v[order]
        sy = yv[order]
        boundaries = np.nonzero(sv[:-1] < sv[1:])[0]
        if min_leaf > 1:
            keep = (boundaries + 1 >= min_leaf) & (n - boundaries - 1 >= min_leaf)
            boundaries = boundaries[keep]
        if boundaries.size == 0:
            continue
        cum1 = np.cumsum(sy)
        n1_left = cum1[boundaries]
        n_left = boundaries + 1
        n0_left = n_left - n1_left
        n1_total = cum1[-1]
        n1_right = n1_total - n1_left
        n_right = n - n_left
        n0_right = n_right - n1_right
        s_left = n0_left * n0_left + n1_left * n1_left
        s_right = n0_right * n0_right + n1_right * n1_right
        num = s_left * n_right + s_right * n_left
        den = n_left * n_right

        score = num / den
        top = score.max()
        window = np.nonzero(score >= top - 64.0 * np.spacing(top))[0]
        for j in window:  # ascending boundary order = ascending threshold
            cand_num = int(num[j])
            cand_den = int(den[j])
            if cand_num * best_den > best_num * cand_den:
                left_value = sv[boundaries[j]]
                right_value = sv[boundaries[j] + 1]
                thr = (left_value + right_value) / 2.0
                if thr >= right_value:  # midpoint rounded onto the right value
                    thr = left_value
                best_num, best_den = cand_num, cand_den
                best_col, best_thr = int(c), float(thr)

    if best_col < 0:
        return None
    return best_col, best_thr
