"""Preliminary estimator: penalized selection over dyadic partitions.

With a penalty linear in the number of segments, the criterion of a
partition is a sum of per-segment weights ``c0 + cost(I)``. Selecting the
best dyadic partition is then a shortest-path problem on the graph whose
vertices are ``1..n+1`` and whose ``2n - 1`` edges are the dyadic
intervals. Edges only go forward, so a single relaxation pass in vertex
order solves it in linear time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .core import (
    CategorySequence,
    FitResult,
    InvalidArgumentError,
    Partition,
    PrefixCounts,
    check_distribution,
    dyadic_level_costs,
    log2_exact,
    segment_cost,
)


@dataclass(frozen=True)
class DyadicGraph:
    """Weighted DAG over vertices ``1..n+1``.

    Weights are not stored; ``weight(i, j)`` and :meth:`level_weights`
    derive them from the prefix counts when needed.
    """

    counts: PrefixCounts
    c0: float

    @property
    def n(self) -> int:
        return self.counts.n

    def successors(self, i: int) -> list[int]:
        """Vertices ``j`` such that ``[i, j)`` is a dyadic interval."""
        if not 1 <= i <= self.n:
            return []
        out = []
        size = 1
        while (i - 1) % size == 0 and i - 1 + size <= self.n:
            out.append(i + size)
            size *= 2
        return out

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(1, self.n + 1) for j in self.successors(i)]

    def weight(self, i: int, j: int) -> float:
        return self.c0 + segment_cost(self.counts, i, j)

    def level_weights(self) -> list[np.ndarray]:
        return [self.c0 + w for w in dyadic_level_costs(self.counts)]


def build_graph(pc: PrefixCounts, c0: float) -> DyadicGraph:
    if not c0 > 0:
        raise InvalidArgumentError(f"penalty constant must be positive, got {c0}")
    log2_exact(pc.n)
    return DyadicGraph(pc, float(c0))


@njit(cache=True, nogil=True)
def _relax(flat_weights, n, c0):
    # Vertices are 0-based here: vertex v stands for position v + 1.
    # Block size 2**h starts at offset 2n - 2n / 2**h in flat_weights.
    inf = np.inf
    dist = np.full(n + 1, inf)
    pred = np.full(n + 1, -1, dtype=np.int64)
    dist[0] = 0.0
    for v in range(n):
        size = 1
        offset = 0
        while v % size == 0 and v + size <= n:
            w = c0 + flat_weights[offset + v // size]
            cand = dist[v] + w
            if dist[v + size] > cand:
                dist[v + size] = cand
                pred[v + size] = v
            offset += n // size
            size *= 2
    return dist, pred


def _shortest_path(flat_weights: np.ndarray, n: int, c0: float = 0.0) -> tuple[Partition, float]:
    """Shortest path when edge weights are ``c0 + flat_weights``, laid out
    like :func:`flat_level_costs`."""
    dist, pred = _relax(np.asarray(flat_weights, dtype=np.float64), n, float(c0))
    path = [n]
    v = pred[n]
    while v != -1:
        path.append(v)
        v = pred[v]
    return Partition(tuple(p + 1 for p in reversed(path))), float(dist[n])


@njit(cache=True, nogil=True)
def _stream_select(values, r, c0):
    # Same path as _relax on the least-squares weights, computed in one
    # pass over the labels. Vertex e pulls from the blocks [e - 2**h, e);
    # visiting h from large to small and keeping strict improvements only
    # reproduces the push order of _relax. Per level we keep the prefix
    # counts and the distance at the start of the current block, so the
    # only O(n) storage is the predecessor level of each vertex.
    n = values.size
    levels = 0
    while (1 << levels) < n:
        levels += 1
    start_counts = np.zeros((levels + 1, r), dtype=np.int64)
    start_dist = np.zeros(levels + 1)
    counts = np.zeros(r, dtype=np.int64)
    pred_level = np.empty(n + 1, dtype=np.int8)
    pred_level[0] = -1
    dist = 0.0
    for e in range(1, n + 1):
        counts[values[e - 1] - 1] += 1
        top = 0
        while top < levels and e % (1 << (top + 1)) == 0:
            top += 1
        best = np.inf
        arg = -1
        for h in range(top, -1, -1):
            size = 1 << h
            sq = 0
            for l in range(r):
                c = counts[l] - start_counts[h, l]
                sq += c * c
            cand = start_dist[h] + (c0 + (size - sq / size))
            if best > cand:
                best = cand
                arg = h
        dist = best
        pred_level[e] = arg
        for h in range(top + 1):
            start_dist[h] = dist
            for l in range(r):
                start_counts[h, l] = counts[l]
    return pred_level, dist


@njit(cache=True, nogil=True)
def _segment_counts(values, r, bp):
    out = np.zeros((bp.size - 1, r), dtype=np.int64)
    for k in range(bp.size - 1):
        for i in range(bp[k] - 1, bp[k + 1] - 1):
            out[k, values[i] - 1] += 1
    return out


def _stream_path(values: np.ndarray, r: int, c0: float) -> tuple[Partition, float]:
    pred_level, dist = _stream_select(values, r, float(c0))
    path = [values.size]
    v = values.size
    while v > 0:
        v -= 1 << int(pred_level[v])
        path.append(v)
    return Partition(tuple(p + 1 for p in reversed(path))), float(dist)


def shortest_path_select(g: DyadicGraph) -> Partition:
    """Breakpoints of a shortest path from 1 to ``n + 1``.

    A predecessor is only replaced on strict improvement, so among equal
    paths the first one met in vertex order is kept.
    """
    return _shortest_path(np.concatenate(g.level_weights()), g.n)[0]


def fit_preliminary(seq: CategorySequence, c0: float) -> FitResult:
    """Best dyadic partition under the criterion ``cost + c0 * D``."""
    if not c0 > 0:
        raise InvalidArgumentError(f"penalty constant must be positive, got {c0}")
    log2_exact(seq.n)
    partition, criterion = _stream_path(seq.values, seq.r, c0)
    bp = np.asarray(partition.breakpoints)
    probs = _segment_counts(seq.values, seq.r, bp) / np.diff(bp)[:, None]
    return FitResult(partition, probs, criterion, float(c0))


def selected_dimension(seq: CategorySequence, c0: float) -> int:
    """Dimension picked by the preliminary estimator; ``c0 = 0`` is allowed."""
    log2_exact(seq.n)
    return _stream_path(seq.values, seq.r, c0)[0].dimension


# ---------------------------------------------------------------------------
# Exact risk and oracle
# ---------------------------------------------------------------------------


def _segment_risk_parts(s: np.ndarray, bp: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # per-segment bias and variance of the segment-mean estimator
    cum = np.concatenate([np.zeros((s.shape[0], 1)), np.cumsum(s, axis=1)], axis=1)
    sq = np.concatenate([[0.0], np.cumsum(np.einsum("li,li->i", s, s))])
    size = np.diff(bp).astype(float)
    seg_sum = cum[:, bp[1:] - 1] - cum[:, bp[:-1] - 1]
    seg_sq = sq[bp[1:] - 1] - sq[bp[:-1] - 1]
    bias = seg_sq - np.einsum("lk,lk->k", seg_sum, seg_sum) / size
    var = (size - seg_sq) / size
    return np.maximum(bias, 0.0), var


def exact_model_risk(s, m: Partition) -> float:
    """Expected squared error of the segment-mean estimator on ``m``.

    Uses ``E||s - s_m||^2 = ||s - sbar_m||^2 + sum_I (1/|I|) sum_{i in I} (1 - ||s_i||^2)``.
    """
    s = check_distribution(s)
    if m.n != s.shape[1]:
        raise InvalidArgumentError(f"partition covers {m.n} positions, matrix has {s.shape[1]}")
    bias, var = _segment_risk_parts(s, np.asarray(m.breakpoints))
    return float(bias.sum() + var.sum())


def projection_error(s, m: Partition) -> float:
    """Squared distance from ``s`` to its projection on matrices constant over ``m``."""
    s = check_distribution(s)
    bias, _ = _segment_risk_parts(s, np.asarray(m.breakpoints))
    return float(bias.sum())


def oracle_partition(s, c_unit: float = 0.0) -> tuple[Partition, float]:
    """Dyadic partition with the smallest exact risk (plus ``c_unit`` per segment).

    Returns the partition and its exact risk, the per-segment surcharge
    excluded.
    """
    s = check_distribution(s)
    n = s.shape[1]
    N = log2_exact(n)
    weights = []
    for h in range(N + 1):
        size = 1 << h
        bp = np.arange(1, n + 2, size)
        bias, var = _segment_risk_parts(s, bp)
        weights.append(bias + var + c_unit)
    partition, _ = _shortest_path(np.concatenate(weights), n)
    return partition, exact_model_risk(s, partition)
