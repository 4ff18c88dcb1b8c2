"""Max-weight station-to-RU assignment.

The per-period scheduling subproblem is a rectangular assignment problem in
which leaving a station or RU unassigned is allowed (the constraint sums are
inequalities). Negative-weight pairings are therefore never forced: clamping
weights at zero and dropping non-positive pairs from the matching yields the
optimal partial assignment. ``brute_force_assignment`` is an independent
exhaustive oracle used by the tests.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .domain import ScheduleMatrix

__all__ = ["max_weight_assignment", "brute_force_assignment", "assignment_value"]

_BRUTE_FORCE_LIMIT = 8


def _check_weights(w: np.ndarray) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.ndim != 2 or w.size == 0:
        raise ValueError(f"weights must be a non-empty K x N matrix, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite")
    return w


def assignment_value(w: np.ndarray, m: ScheduleMatrix) -> float:
    """Objective value sum_{k,n} s[k,n] * w[k,n] of a schedule."""
    return float(np.sum(np.asarray(w, dtype=float) * m.assign))


def max_weight_assignment(w: np.ndarray) -> ScheduleMatrix:
    """Schedule maximizing the total weight of assigned (station, RU) pairs.

    Pairs whose weight is <= 0 are left unassigned, so the objective value is
    always >= 0. Ties are broken deterministically by the solver's stable
    order, which keeps simulation runs bit-reproducible.
    """
    w = _check_weights(w)
    clamped = np.maximum(w, 0.0)
    rows, cols = linear_sum_assignment(clamped, maximize=True)
    assign = np.zeros(w.shape, dtype=np.int8)
    for k, n in zip(rows, cols):
        if w[k, n] > 0:
            assign[k, n] = 1
    return ScheduleMatrix(assign)


def brute_force_assignment(w: np.ndarray) -> tuple[float, ScheduleMatrix]:
    """Exhaustive search over all partial injective assignments.

    Dynamic program over RUs with a bitmask of used stations; every partial
    assignment is covered, so the returned value is the exact optimum. Only
    meant for small instances (max(K, N) <= 8).
    """
    w = _check_weights(w)
    k_count, n_count = w.shape
    if max(k_count, n_count) > _BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force limited to max(K, N) <= {_BRUTE_FORCE_LIMIT}, got {w.shape}")

    # stage[n][mask] = best value over RUs 0..n-1 with exactly `mask` stations assigned
    n_masks = 1 << k_count
    stage = np.full((n_count + 1, n_masks), -np.inf)
    stage[0, 0] = 0.0
    for n in range(n_count):
        cur, nxt = stage[n], stage[n + 1]
        nxt[:] = cur  # leaving RU n unassigned
        for mask in range(n_masks):
            if cur[mask] == -np.inf:
                continue
            for k in range(k_count):
                bit = 1 << k
                if not mask & bit:
                    cand = cur[mask] + w[k, n]
                    if cand > nxt[mask | bit]:
                        nxt[mask | bit] = cand

    mask = int(np.argmax(stage[n_count]))
    value = float(stage[n_count, mask])
    assign = np.zeros(w.shape, dtype=np.int8)
    for n in range(n_count - 1, -1, -1):
        if stage[n + 1, mask] == stage[n, mask]:
            continue  # RU n left empty on (one) optimal path
        for k in range(k_count):
            bit = 1 << k
            if mask & bit and stage[n + 1, mask] == stage[n, mask ^ bit] + w[k, n]:
                assign[k, n] = 1
                mask ^= bit
                break
    return value, ScheduleMatrix(assign)
