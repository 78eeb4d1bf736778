"""Two-stage hybrid estimator.

Stage 1 selects a dyadic partition from the even-indexed observations.
Stage 2 uses the odd-indexed observations to choose a coarsening of that
partition under a penalty depending on the number of segments. The
stage-2 segment means are written into both the even and the odd columns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .calibrate import calibrate_c0, calibrate_stage2, default_dmax
from .core import (
    CategorySequence,
    FitResult,
    InvalidArgumentError,
    Partition,
    log2_exact,
    prefix_counts,
    segment_cost_table,
)
from .dyadic_select import fit_preliminary
from .interval_dp import best_per_dimension, linear_penalty_path, select_with_penalty


@dataclass(frozen=True)
class LogPenalty:
    """``(c1 + c2 ln(D_hat / D)) D``."""

    c1: float
    c2: float

    def __post_init__(self):
        if not (self.c1 > 0 and self.c2 > 0):
            raise InvalidArgumentError("c1 and c2 must be positive")

    def __call__(self, D: int, D_hat: int) -> float:
        return (self.c1 + self.c2 * math.log(D_hat / D)) * D


@dataclass(frozen=True)
class LogPracticalPenalty:
    """``beta (2.5 + ln(D_hat / D)) D``; ``beta=None`` calibrates it from the data."""

    beta: float | None = None
    form = "log_practical"

    def __post_init__(self):
        if self.beta is not None and not self.beta > 0:
            raise InvalidArgumentError("beta must be positive")

    def __call__(self, D: int, D_hat: int) -> float:
        return self.beta * (2.5 + math.log(D_hat / D)) * D


@dataclass(frozen=True)
class LinearPenalty:
    """``beta D``; ``beta=None`` calibrates it from the data."""

    beta: float | None = None
    form = "linear"

    def __post_init__(self):
        if self.beta is not None and not self.beta > 0:
            raise InvalidArgumentError("beta must be positive")

    def __call__(self, D: int, D_hat: int) -> float:
        return self.beta * D


PenaltyForm = Union[LogPenalty, LogPracticalPenalty, LinearPenalty]


@dataclass(frozen=True)
class HybridConfig:
    """Settings of :func:`fit_hybrid`.

    ``c0=None`` calibrates the stage-1 constant; ``d_max=None`` uses
    :func:`~catseg.calibrate.default_dmax` of the full length.
    """

    c0: float | None = None
    penalty: PenaltyForm = field(default_factory=LinearPenalty)
    d_max: int | None = None

    def __post_init__(self):
        if self.c0 is not None and not self.c0 > 0:
            raise InvalidArgumentError("c0 must be positive")
        if self.d_max is not None and self.d_max < 1:
            raise InvalidArgumentError("d_max must be >= 1")


@dataclass(frozen=True)
class HybridResult:
    stage1: FitResult
    stage2_partition: Partition
    segment_probs: np.ndarray
    assembled: np.ndarray
    stage2_criterion: float
    penalty: PenaltyForm

    @property
    def dimension(self) -> int:
        return self.stage2_partition.dimension

    @property
    def partition(self) -> Partition:
        """Stage-2 partition on the full index scale."""
        return map_to_full_indices(self.stage2_partition)


def split_even_odd(seq: CategorySequence) -> tuple[CategorySequence, CategorySequence]:
    """Observations at even positions ``2, 4, ..`` and at odd positions ``1, 3, ..``."""
    if seq.n % 2:
        raise InvalidArgumentError(f"need an even length, got {seq.n}")
    return CategorySequence(seq.values[1::2], seq.r), CategorySequence(seq.values[0::2], seq.r)


def map_to_full_indices(p: Partition) -> Partition:
    return Partition(tuple(2 * b - 1 for b in p.breakpoints))


def fit_hybrid(seq: CategorySequence, cfg: HybridConfig | None = None) -> HybridResult:
    cfg = cfg or HybridConfig()
    N = log2_exact(seq.n)
    if N < 1:
        raise InvalidArgumentError("the hybrid estimator needs n >= 2")
    d_max = cfg.d_max or default_dmax(seq.n)
    even, odd = split_even_odd(seq)

    c0 = cfg.c0 if cfg.c0 is not None else calibrate_c0(even, d_max)
    stage1 = fit_preliminary(even, c0)
    base = stage1.partition
    D_hat = base.dimension
    cap = min(D_hat, d_max)

    penalty = cfg.penalty
    pc = prefix_counts(odd)
    if D_hat == 1:
        chosen = base
        criterion = float(pc.n - (pc.table[-1] @ pc.table[-1]) / pc.n)
    else:
        if not isinstance(penalty, LogPenalty) and penalty.beta is None:
            beta = calibrate_stage2(odd, base, penalty.form, d_max)
            penalty = type(penalty)(beta)
        table = segment_cost_table(pc, base.breakpoints)
        chosen = None
        if isinstance(penalty, LinearPenalty):
            chosen, criterion = linear_penalty_path(base.breakpoints, table, penalty.beta)
            if chosen.dimension > cap:
                chosen = None
        if chosen is None:
            per_dim = best_per_dimension(base.breakpoints, table, cap)
            chosen, criterion = select_with_penalty(per_dim, lambda D: penalty(D, D_hat))

    bp = np.asarray(chosen.breakpoints)
    counts = pc.table[bp[1:] - 1] - pc.table[bp[:-1] - 1]
    probs = counts / np.diff(bp)[:, None]
    half = probs[chosen.labels()].T
    assembled = np.repeat(half, 2, axis=1)
    return HybridResult(stage1, chosen, probs, assembled, criterion, penalty)
