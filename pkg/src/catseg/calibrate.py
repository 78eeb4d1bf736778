"""Data-driven choice of penalty constants by the dimension-jump heuristic.

For each constant ``c`` on a grid the selected dimension ``D(c)`` is
recorded. The constant right after the largest drop in dimension (subject
to ``D <= d_max``) is the minimal penalty; twice that value is used.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

from .core import (
    CalibrationError,
    CategorySequence,
    InvalidArgumentError,
    Partition,
    log2_exact,
    prefix_counts,
    segment_cost_table,
)
from .dyadic_select import selected_dimension
from .interval_dp import best_per_dimension, linear_penalty_path, select_with_penalty

logger = logging.getLogger(__name__)

DEFAULT_GRID = tuple(round(0.1 * k, 1) for k in range(31))

# Reported maximal dimensions for n = 2**N.
DMAX_ANCHORS = {10: 30, 12: 100, 13: 175}


def default_dmax(n: int) -> int:
    """Maximal admissible dimension, of order ``n / ln(n)^2``.

    The anchors in :data:`DMAX_ANCHORS` take precedence where defined.
    """
    N = log2_exact(n)
    if N in DMAX_ANCHORS:
        return DMAX_ANCHORS[N]
    if n < 3:
        return n
    return int(min(n, max(1, math.floor(n / math.log(n) ** 2))))


def fallback_c0(r: int) -> float:
    return 2.0 if r == 2 else 2.5


def dimension_path(
    seq: CategorySequence,
    grid: Sequence[float],
    fitter: Callable[[CategorySequence, float], int],
    workers: int | None = None,
) -> list[tuple[float, int]]:
    """Selected dimension for every grid value, in grid order."""
    grid = [float(c) for c in grid]
    if not grid:
        raise InvalidArgumentError("grid must not be empty")
    if any(c < 0 for c in grid) or any(a >= b for a, b in zip(grid, grid[1:])):
        raise InvalidArgumentError("grid must be strictly increasing and non-negative")
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            dims = list(pool.map(lambda c: fitter(seq, c), grid))
    else:
        dims = [fitter(seq, c) for c in grid]
    return [(c, int(d)) for c, d in zip(grid, dims)]


def dimension_jump(path: Sequence[tuple[float, int]], d_max: int) -> float:
    """Grid value just after the largest dimension drop with ``D <= d_max``.

    Among equal drops the smallest constant wins. Raises
    :class:`CalibrationError` when no grid point after a drop satisfies the
    constraint.
    """
    if not path:
        raise InvalidArgumentError("path must not be empty")
    best_c, best_jump = None, 0
    for (_, d_prev), (c, d) in zip(path, path[1:]):
        jump = d_prev - d
        if d <= d_max and jump > best_jump:
            best_c, best_jump = c, jump
    if best_c is None:
        raise CalibrationError(f"no dimension drop lands at or below d_max={d_max}")
    return best_c


def _is_flat(path: Sequence[tuple[float, int]]) -> bool:
    return len({d for _, d in path}) == 1


def calibrate_c0(
    seq: CategorySequence,
    d_max: int | None = None,
    grid: Sequence[float] = DEFAULT_GRID,
    workers: int | None = None,
) -> float:
    """Penalty constant for the preliminary estimator, ``2 * c_hat``.

    A flat dimension path carries no information; the fixed constants 2
    (``r = 2``) and 2.5 (``r >= 3``) are returned instead.
    """
    d_max = default_dmax(seq.n) if d_max is None else d_max
    path = dimension_path(seq, grid, selected_dimension, workers=workers)
    if _is_flat(path):
        logger.info("flat dimension path; falling back to c0=%s", fallback_c0(seq.r))
        return fallback_c0(seq.r)
    return 2.0 * dimension_jump(path, d_max)


def stage2_selector(
    odd: CategorySequence, base: Partition, form: str, d_max: int
) -> Callable[[float], Partition]:
    """Map a constant to the coarsening of ``base`` selected on ``odd``.

    ``form`` is ``"log_practical"`` (penalty ``c (2.5 + ln(D_hat / D)) D``)
    or ``"linear"`` (penalty ``c D``).
    """
    pc = prefix_counts(odd)
    table = segment_cost_table(pc, base.breakpoints)
    D_hat = base.dimension
    if form == "log_practical":
        per_dim = best_per_dimension(base.breakpoints, table, min(D_hat, d_max))

        def select(c: float) -> Partition:
            return select_with_penalty(per_dim, lambda D: c * (2.5 + math.log(D_hat / D)) * D)[0]

    elif form == "linear":

        def select(c: float) -> Partition:
            return linear_penalty_path(base.breakpoints, table, c)[0]

    else:
        raise InvalidArgumentError(f"unknown stage-2 penalty form {form!r}")
    return select


def calibrate_stage2(
    odd: CategorySequence,
    base: Partition,
    form: str,
    d_max: int,
    grid: Sequence[float] = DEFAULT_GRID,
) -> float:
    """Stage-2 penalty constant by the same dimension-jump rule as :func:`calibrate_c0`."""
    if base.n != odd.n:
        raise InvalidArgumentError("base partition and sequence lengths differ")
    if base.dimension == 1:
        return 2.0 * float(grid[0])
    select = stage2_selector(odd, base, form, d_max)
    path = dimension_path(odd, grid, lambda _, c: select(c).dimension)
    if _is_flat(path):
        return fallback_c0(odd.r)
    return 2.0 * dimension_jump(path, d_max)


def monotone_nonincreasing(path: Sequence[tuple[float, int]]) -> bool:
    dims = np.array([d for _, d in path])
    return bool(np.all(np.diff(dims) <= 0))
