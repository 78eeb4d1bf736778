"""Segmentation by dynamic programming over a fixed set of candidate breakpoints.

Candidate breakpoints ``b_0 < ... < b_K`` are given; a coarsening keeps
``b_0``, ``b_K`` and any subset of the interior ones. Segment costs are
additive and supplied either as a ``(K+1, K+1)`` array indexed by
breakpoint *positions*, or as a callable ``cost(a, b)`` on breakpoint
*values*.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import InvalidArgumentError, Partition

MATERIALIZE_LIMIT = 10**6


@dataclass(frozen=True)
class DimensionTable:
    """Best cost and partition for each number of segments ``D = 1..D_max``."""

    breakpoints: tuple[int, ...]
    costs: np.ndarray
    argmins: np.ndarray

    @property
    def max_dimension(self) -> int:
        return self.costs.size

    def best_cost(self, D: int) -> float:
        return float(self.costs[D - 1])

    def partition(self, D: int) -> Partition:
        if not 1 <= D <= self.max_dimension:
            raise InvalidArgumentError(f"dimension {D} outside 1..{self.max_dimension}")
        K = len(self.breakpoints) - 1
        idx = [K]
        pos = K
        for d in range(D, 1, -1):
            pos = int(self.argmins[d - 1, pos])
            idx.append(pos)
        idx.append(0)
        return Partition(tuple(self.breakpoints[i] for i in reversed(idx)))


def _cost_matrix(breakpoints: Sequence[int], costs) -> np.ndarray:
    K = len(breakpoints) - 1
    if callable(costs):
        if K * (K + 1) // 2 > MATERIALIZE_LIMIT:
            raise InvalidArgumentError(f"{K} candidate segments are too many to tabulate")
        table = np.full((K + 1, K + 1), np.inf)
        for a in range(K + 1):
            for b in range(a + 1, K + 1):
                table[a, b] = costs(breakpoints[a], breakpoints[b])
        return table
    table = np.array(costs, dtype=float)
    if table.shape != (K + 1, K + 1):
        raise InvalidArgumentError(f"cost table must be {(K + 1, K + 1)}, got {table.shape}")
    table[np.tril_indices(K + 1)] = np.inf
    return table


def best_per_dimension(
    breakpoints: Sequence[int],
    costs: np.ndarray | Callable[[int, int], float],
    d_max: int,
) -> DimensionTable:
    """Bellman recursion over coarsenings, ``O(K^2 d_max)``.

    ``best[D][k]`` is the minimal cost of covering ``[b_0, b_k)`` with
    ``D`` segments.
    """
    if d_max < 1:
        raise InvalidArgumentError(f"d_max must be >= 1, got {d_max}")
    bp = tuple(int(b) for b in breakpoints)
    if len(bp) < 2:
        raise InvalidArgumentError("need at least two breakpoints")
    K = len(bp) - 1
    table = _cost_matrix(bp, costs)
    D_max = min(K, d_max)

    best = table[0].copy()
    out_costs = [best[K]]
    argmins = np.zeros((D_max, K + 1), dtype=np.int64)
    for D in range(2, D_max + 1):
        # candidate[a, k] = best[a] + cost(a, k); argmin keeps the smallest a on ties
        cand = best[:, None] + table
        arg = np.argmin(cand, axis=0)
        best = cand[arg, np.arange(K + 1)]
        argmins[D - 1] = arg
        out_costs.append(best[K])
    return DimensionTable(bp, np.array(out_costs, dtype=float), argmins)


def select_with_penalty(
    per_dim: DimensionTable, penalty: Callable[[int], float]
) -> tuple[Partition, float]:
    """Minimize ``best_cost(D) + penalty(D)``; ties go to the smaller ``D``."""
    dims = np.arange(1, per_dim.max_dimension + 1)
    crit = per_dim.costs + np.array([penalty(int(D)) for D in dims], dtype=float)
    D = int(dims[np.argmin(crit)])
    return per_dim.partition(D), float(crit[D - 1])


def linear_penalty_path(
    breakpoints: Sequence[int],
    costs: np.ndarray | Callable[[int, int], float],
    beta: float,
) -> tuple[Partition, float]:
    """Coarsening minimizing ``cost + beta * D`` by one shortest-path pass."""
    if not beta >= 0:
        raise InvalidArgumentError(f"beta must be non-negative, got {beta}")
    bp = tuple(int(b) for b in breakpoints)
    K = len(bp) - 1
    table = _cost_matrix(bp, costs)
    dist = np.full(K + 1, np.inf)
    pred = np.full(K + 1, -1, dtype=np.int64)
    dist[0] = 0.0
    for k in range(1, K + 1):
        cand = dist[:k] + table[:k, k] + beta
        a = int(np.argmin(cand))
        dist[k], pred[k] = cand[a], a
    idx = [K]
    while pred[idx[-1]] != -1:
        idx.append(int(pred[idx[-1]]))
    return Partition(tuple(bp[i] for i in reversed(idx))), float(dist[K])
