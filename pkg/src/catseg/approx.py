"""Greedy dyadic refinement and the approximation numbers it yields.

Starting from the whole index set, any dyadic interval on which ``t`` is
badly approximated by a constant column (error above ``eps``) is split
into its two halves, until no such interval remains.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    DegenerateInputError,
    DyadicInterval,
    InvalidArgumentError,
    Partition,
    besov_seminorm,
    log2_exact,
)


@dataclass(frozen=True)
class ApproxRun:
    eps: float
    partition: Partition
    error: float
    segment_errors: np.ndarray

    @property
    def size(self) -> int:
        return self.partition.dimension


def _as_matrix(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    return t[None, :] if t.ndim == 1 else t


def _block_errors(t: np.ndarray, size: int) -> np.ndarray:
    r, n = t.shape
    blocks = t.reshape(r, n // size, size)
    dev = blocks - blocks.mean(axis=2, keepdims=True)
    err = np.sqrt(np.einsum("lkb,lkb->k", dev, dev))
    # constant blocks get an exact zero rather than rounding noise
    const = np.all(blocks == blocks[:, :, :1], axis=(0, 2))
    err[const] = 0.0
    return err


def e2_error(t, I: DyadicInterval) -> float:
    """Distance on ``I`` between ``t`` and the best constant column (its mean)."""
    t = _as_matrix(t)
    a, b = I.bounds(t.shape[1])
    return float(_block_errors(t[:, a - 1 : b - 1], b - a)[0])


def error_table(t) -> list[np.ndarray]:
    """``table[j][k]`` is the error on node ``(j, k)``, for every level."""
    t = _as_matrix(t)
    N = log2_exact(t.shape[1])
    return [_block_errors(t, 2 ** (N - j)) for j in range(N + 1)]


def _refine(table: list[np.ndarray], eps: float, schedule: str) -> list[tuple[int, int]]:
    N = len(table) - 1
    done = []
    todo = deque([(0, 0)])
    pop = todo.popleft if schedule == "bfs" else todo.pop
    while todo:
        j, k = pop()
        if table[j][k] > eps:
            # a positive error implies at least two distinct columns, so j < N
            if schedule == "bfs":
                todo.extend([(j + 1, 2 * k), (j + 1, 2 * k + 1)])
            else:
                todo.extend([(j + 1, 2 * k + 1), (j + 1, 2 * k)])
        else:
            done.append((j, k))
    done.sort(key=lambda node: node[1] * 2 ** (N - node[0]))
    return done


def _run_from_table(table, eps: float, n: int, schedule: str) -> ApproxRun:
    N = len(table) - 1
    nodes = _refine(table, eps, schedule)
    bp = [k * 2 ** (N - j) + 1 for j, k in nodes] + [n + 1]
    errs = np.array([table[j][k] for j, k in nodes])
    return ApproxRun(eps, Partition(tuple(bp)), float(np.sum(errs**2)), errs)


def adaptive_partition(t, eps: float, schedule: str = "bfs") -> ApproxRun:
    """Refine until every interval has error at most ``eps``.

    ``schedule`` ("bfs" or "dfs") only changes the order of the splits;
    the final partition is the same.
    """
    if not eps > 0:
        raise InvalidArgumentError(f"eps must be positive, got {eps}")
    if schedule not in ("bfs", "dfs"):
        raise InvalidArgumentError(f"unknown schedule {schedule!r}")
    t = _as_matrix(t)
    return _run_from_table(error_table(t), eps, t.shape[1], schedule)


def _candidate_sweep(t: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
    """Sizes of the greedy partition at every attained error value.

    Also returns the size of the exact partition, reached for every eps
    below the smallest positive error.
    """
    table = error_table(t)
    n = t.shape[1]
    values = np.unique(np.concatenate(table))
    candidates = values[values > 0][::-1]
    if candidates.size == 0 or candidates[0] < table[0][0]:
        candidates = np.concatenate([[table[0][0]], candidates])
    sizes = np.array([_run_from_table(table, eps, n, "bfs").size for eps in candidates])
    exact_size = _run_from_table(table, 0.0, n, "bfs").size
    return candidates, sizes, exact_size


def e_d(t, D: int) -> float:
    """Infimum of ``|I(t, eps)| * eps^2`` over ``eps > 0`` with at most ``D`` intervals."""
    return e_d_curve(t, [D])[0]


def e_d_curve(t, dims: Sequence[int]) -> np.ndarray:
    t = _as_matrix(t)
    n = t.shape[1]
    log2_exact(n)
    dims = [int(D) for D in dims]
    if any(not 1 <= D <= n for D in dims):
        raise InvalidArgumentError(f"dimensions must lie in 1..{n}")
    candidates, sizes, exact_size = _candidate_sweep(t)
    values = sizes * candidates**2
    out = []
    for D in dims:
        if exact_size <= D:
            # eps -> 0+ keeps the exact partition, whose bound tends to 0
            out.append(0.0)
        else:
            out.append(float(np.min(values[sizes <= D])))
    return np.array(out)


@dataclass(frozen=True)
class BesovReport:
    alpha: float
    p: float
    radius: float
    dims: np.ndarray
    e_d: np.ndarray
    ratios: np.ndarray
    slope: float
    max_ratio: float
    passed: bool

    def rows(self) -> list[dict]:
        return [
            {"dimension": int(D), "e_d": float(e), "ratio": float(q)}
            for D, e, q in zip(self.dims, self.e_d, self.ratios)
        ]


def besov_bound_check(t, alpha: float, p: float, dims: Sequence[int]) -> BesovReport:
    """Compare ``E_D(t)`` with the rate ``n R^2 D^(-2 alpha)``.

    ``R`` is the Besov seminorm divided by ``sqrt(n)``. The check passes
    when the ratios are finite and the log-log slope of ``E_D`` against
    ``D``, over the dimensions where it is positive, is at most
    ``-2 alpha + 0.5``. With fewer than two positive values the slope is
    reported as ``-inf``.
    """
    t = _as_matrix(t)
    n = t.shape[1]
    seminorm = besov_seminorm(t, alpha, p)
    if seminorm == 0:
        raise DegenerateInputError("t has no detail coefficients; the bound is vacuous")
    radius = seminorm / np.sqrt(n)
    dims = np.array(sorted(set(int(D) for D in dims)))
    values = e_d_curve(t, dims)
    ratios = values * dims ** (2.0 * alpha) / (n * radius**2)
    positive = values > 0
    if positive.sum() >= 2:
        slope = float(np.polyfit(np.log(dims[positive]), np.log(values[positive]), 1)[0])
    else:
        slope = float("-inf")
    max_ratio = float(np.max(ratios))
    passed = bool(np.isfinite(max_ratio) and slope <= -2.0 * alpha + 0.5)
    return BesovReport(alpha, p, float(radius), dims, values, ratios, slope, max_ratio, passed)
