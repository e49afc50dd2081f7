"""Minimum-cost assignment by the Hungarian method (shortest augmenting
paths with row/column potentials), for rectangular matrices with no more
rows than columns."""

from __future__ import annotations

import math

import numpy as np


def hungarian(cost) -> tuple[dict[int, int], float]:
    """Assign every row to a distinct column at minimum total cost.

    Parameters
    ----------
    cost : array_like, shape (n, m) with n <= m
        Finite cost entries.

    Returns
    -------
    assignment : dict
        ``row -> column``.
    total : float
        Sum of the selected entries.

    Among equal-cost optima the scan order favours low column indices for
    low row indices, so an all-equal matrix maps row ``r`` to column ``r``.
    """
    c = np.asarray(cost, dtype=float)
    if c.size == 0:
        return {}, 0.0
    if c.ndim != 2:
        raise ValueError(f"cost must be 2-D, got shape {c.shape}")
    n, m = c.shape
    if n > m:
        raise ValueError(f"more rows ({n}) than columns ({m})")
    if not np.all(np.isfinite(c)):
        raise ValueError("cost entries must be finite")

    inf = math.inf
    # 1-based; index 0 is the virtual column used to start each augmentation.
    u = [0.0] * (n + 1)
    v = [0.0] * (m + 1)
    match = [0] * (m + 1)  # match[j] = row holding column j
    way = [0] * (m + 1)

    for row in range(1, n + 1):
        match[0] = row
        j0 = 0
        minv = [inf] * (m + 1)
        used = [False] * (m + 1)
        while True:
            used[j0] = True
            i0 = match[j0]
            delta = inf
            j1 = 0
            crow = c[i0 - 1]
            for j in range(1, m + 1):
                if used[j]:
                    continue
                cur = crow[j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(m + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1

    assignment = {match[j] - 1: j - 1 for j in range(1, m + 1) if match[j]}
    total = math.fsum(c[r, col] for r, col in sorted(assignment.items()))
    return dict(sorted(assignment.items())), total
