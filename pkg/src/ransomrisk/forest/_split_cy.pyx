# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled best-split kernel.

Same contract and selection rule as the pure-Python kernel in _split_py: it
minimizes weighted child Gini impurity, compared exactly via integer fractions
(maximize S_l/n_l + S_r/n_r), tie-breaking on lowest column then lowest
threshold. Cross-multiplied comparisons run in 128-bit integers, and the whole
boundary scan happens in C; only the per-column argsort stays in numpy.
"""

import numpy as np

cdef extern from *:
    ctypedef long long int128 "__int128"


def best_split(double[:, ::1] X, signed char[::1] y,
               long long[::1] idx, long long[::1] cols,
               long long min_leaf=1):
    """Return (column, threshold) for the best valid split, or None."""
    cdef Py_ssize_t n = idx.shape[0]
    cdef Py_ssize_t n_cols = cols.shape[0]
    if n < 2 * min_leaf:
        return None

    values_arr = np.empty(n, dtype=np.float64)
    labels_arr = np.empty(n, dtype=np.int8)
    cdef double[::1] values = values_arr
    cdef signed char[::1] labels = labels_arr

    cdef long long best_num = -1
    cdef long long best_den = 1
    cdef long long best_col = -1
    cdef double best_thr = 0.0

    cdef Py_ssize_t ci, i
    cdef long long c
    cdef long long[::1] order
    cdef long long cum1, n1_total
    cdef long long n_left, n_right, n0_left, n1_left, n0_right, n1_right
    cdef long long s_left, s_right, num, den
    cdef double left_value, right_value, thr, prev, cur

    for ci in range(n_cols):
        c = cols[ci]
        for i in range(n):
            values[i] = X[idx[i], c]
            labels[i] = y[idx[i]]
        order = np.argsort(values_arr)

        n1_total = 0
        for i in range(n):
            n1_total += labels[order[i]]

        cum1 = 0
        for i in range(n - 1):
            cum1 += labels[order[i]]
            prev = values[order[i]]
            cur = values[order[i + 1]]
            if not prev < cur:
                continue
            n_left = i + 1
            n_right = n - n_left
            if n_left < min_leaf or n_right < min_leaf:
                continue
            n1_left = cum1
            n0_left = n_left - n1_left
            n1_right = n1_total - n1_left
            n0_right = n_right - n1_right
            s_left = n0_left * n0_left + n1_left * n1_left
            s_right = n0_right * n0_right + n1_right * n1_right
            num = s_left * n_right + s_right * n_left
            den = n_left * n_right
            if <int128>num * <int128>best_den > <int128>best_num * <int128>den:
                thr = (prev + cur) / 2.0
                if thr >= cur:  # midpoint rounded onto the right value
                    thr = prev
                best_num = num
                best_den = den
                best_col = c
                best_thr = thr

    if best_col < 0:
        return None
    return int(best_col), float(best_thr)
