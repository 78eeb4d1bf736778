"""Monte Carlo harness: synthetic distributions, sampling and risk reports."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from importlib import resources
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .calibrate import calibrate_c0, default_dmax, fallback_c0
from .core import (
    CategorySequence,
    InvalidArgumentError,
    Partition,
    check_distribution,
)
from .dyadic_select import fit_preliminary, oracle_partition
from .hybrid import HybridConfig, LinearPenalty, LogPracticalPenalty, fit_hybrid

# ---------------------------------------------------------------------------
# Piecewise distributions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Segment:
    length: int
    kind: str
    start: tuple[float, ...]
    end: tuple[float, ...] | None = None


@dataclass(frozen=True)
class PiecewiseSpec:
    """A distribution made of constant or linearly interpolated blocks."""

    n: int
    r: int
    segments: tuple[Segment, ...]
    name: str = ""

    def __post_init__(self):
        if sum(seg.length for seg in self.segments) != self.n:
            raise InvalidArgumentError("segment lengths must sum to n")
        for seg in self.segments:
            if seg.length < 1:
                raise InvalidArgumentError("segment lengths must be positive")
            if seg.kind not in ("constant", "affine"):
                raise InvalidArgumentError(f"unknown segment kind {seg.kind!r}")
            vectors = [seg.start] + ([seg.end] if seg.kind == "affine" else [])
            for v in vectors:
                if v is None or len(v) != self.r:
                    raise InvalidArgumentError(f"segment vectors must have length {self.r}")
                check_distribution(np.asarray(v, dtype=float)[:, None])

    @property
    def true_dimension(self) -> int | None:
        """Number of constant pieces, or ``None`` when some block is affine."""
        if any(seg.kind != "constant" for seg in self.segments):
            return None
        return len(self.segments)

    @property
    def breakpoints(self) -> Partition:
        return Partition(tuple(np.cumsum([1] + [seg.length for seg in self.segments])))

    @classmethod
    def from_dict(cls, data: dict, name: str = "") -> "PiecewiseSpec":
        try:
            segments = []
            for item in data["segments"]:
                if item["kind"] == "constant":
                    segments.append(Segment(int(item["len"]), "constant", tuple(item["p"])))
                elif item["kind"] == "affine":
                    segments.append(
                        Segment(int(item["len"]), "affine", tuple(item["from"]), tuple(item["to"]))
                    )
                else:
                    raise InvalidArgumentError(f"unknown segment kind {item['kind']!r}")
            return cls(int(data["n"]), int(data["r"]), tuple(segments), data.get("name", name))
        except (KeyError, TypeError) as exc:
            raise InvalidArgumentError(f"malformed spec: {exc}") from exc

    def to_dict(self) -> dict:
        segs = []
        for seg in self.segments:
            if seg.kind == "constant":
                segs.append({"len": seg.length, "kind": "constant", "p": list(seg.start)})
            else:
                segs.append(
                    {"len": seg.length, "kind": "affine", "from": list(seg.start), "to": list(seg.end)}
                )
        return {"n": self.n, "r": self.r, "segments": segs}


def load_spec(path: str | Path) -> PiecewiseSpec:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InvalidArgumentError(f"{path}: {exc}") from exc
    return PiecewiseSpec.from_dict(data, name=path.stem)


def analogue_specs() -> dict[str, PiecewiseSpec]:
    """The eight shipped test distributions, keyed by name."""
    text = resources.files("catseg").joinpath("data/analogue_specs.json").read_text()
    data = json.loads(text)
    return {name: PiecewiseSpec.from_dict(d, name) for name, d in data["specs"].items()}


def build_distribution(spec: PiecewiseSpec) -> np.ndarray:
    blocks = []
    for seg in spec.segments:
        start = np.asarray(seg.start, dtype=float)
        if seg.kind == "constant":
            blocks.append(np.repeat(start[:, None], seg.length, axis=1))
            continue
        end = np.asarray(seg.end, dtype=float)
        w = np.linspace(0.0, 1.0, seg.length) if seg.length > 1 else np.zeros(1)
        block = start[:, None] * (1 - w) + end[:, None] * w
        blocks.append(block / block.sum(axis=0, keepdims=True))
    return check_distribution(np.concatenate(blocks, axis=1))


# ---------------------------------------------------------------------------
# Sampling and risk
# ---------------------------------------------------------------------------


def replicate_seed(seed: int, index: int) -> np.random.SeedSequence:
    """Seed of replicate ``index``, independent of execution order."""
    return np.random.SeedSequence(seed, spawn_key=(index,))


def sample_sequence(s, seed) -> CategorySequence:
    """Draw ``Y_i`` from column ``i`` of ``s``, independently across ``i``."""
    s = check_distribution(s)
    rng = np.random.default_rng(seed)
    u = rng.random(s.shape[1])
    cum = np.cumsum(s, axis=0)
    labels = np.minimum((u[None, :] >= cum).sum(axis=0), s.shape[0] - 1) + 1
    return CategorySequence(labels, s.shape[0])


@dataclass(frozen=True)
class RiskReport:
    estimator: str
    mean_risk: float
    std_error: float
    reps: int
    oracle_risk: float
    ratio: float
    mean_dimension: float
    dimension_std_error: float
    baseline_ratio: float = float("nan")


Estimator = Callable[[CategorySequence], tuple[np.ndarray, int]]


def _report(name, losses, dims, oracle_risk) -> RiskReport:
    losses = np.asarray(losses, dtype=float)
    dims = np.asarray(dims, dtype=float)
    reps = losses.size
    mean = float(np.sum(losses) / reps)
    return RiskReport(
        estimator=name,
        mean_risk=mean,
        std_error=float(losses.std(ddof=1) / np.sqrt(reps)),
        reps=reps,
        oracle_risk=oracle_risk,
        ratio=mean / oracle_risk if oracle_risk > 0 else float("inf"),
        mean_dimension=float(np.sum(dims) / reps),
        dimension_std_error=float(dims.std(ddof=1) / np.sqrt(reps)),
    )


def _run_replicates(s, estimators: Sequence[Estimator], reps: int, seed: int, workers: int | None):
    def one(index: int):
        seq = sample_sequence(s, replicate_seed(seed, index))
        out = []
        for est in estimators:
            estimate, dim = est(seq)
            out.append((float(np.sum((s - estimate) ** 2)), int(dim)))
        return out

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(one, range(reps)))
    else:
        results = [one(i) for i in range(reps)]
    # results are in replicate order regardless of scheduling
    return [[res[k] for res in results] for k in range(len(estimators))]


def monte_carlo_risk(
    s,
    estimator: Estimator,
    reps: int,
    seed: int,
    name: str = "estimator",
    workers: int | None = None,
    oracle_risk: float | None = None,
) -> RiskReport:
    """Average squared error of ``estimator`` over ``reps`` sampled sequences.

    ``estimator`` maps a sequence to ``(estimate, dimension)``. The oracle
    risk defaults to the best exact risk over dyadic partitions.
    """
    if reps < 2:
        raise InvalidArgumentError("need at least two replicates")
    s = check_distribution(s)
    if oracle_risk is None:
        oracle_risk = oracle_partition(s)[1]
    (pairs,) = _run_replicates(s, [estimator], reps, seed, workers)
    return _report(name, [p[0] for p in pairs], [p[1] for p in pairs], oracle_risk)


# ---------------------------------------------------------------------------
# Estimator configurations of the comparison study
# ---------------------------------------------------------------------------


def preliminary_estimator(d_max: int | None = None) -> Estimator:
    """Preliminary estimator with a dimension-jump constant."""

    def run(seq: CategorySequence):
        fit = fit_preliminary(seq, calibrate_c0(seq, d_max))
        return fit.estimate(), fit.dimension

    return run


def hybrid_estimator(penalty, d_max: int | None = None) -> Estimator:
    def run(seq: CategorySequence):
        res = fit_hybrid(seq, HybridConfig(c0=None, penalty=penalty, d_max=d_max))
        return res.assembled, res.dimension

    return run


def comparison_table(
    spec: PiecewiseSpec | np.ndarray,
    reps: int,
    seed: int,
    workers: int | None = None,
) -> list[RiskReport]:
    """Preliminary vs hybrid (log-practical and linear penalties) on common samples.

    ``baseline_ratio`` holds each estimator's mean risk divided by the
    preliminary estimator's.
    """
    if reps < 2:
        raise InvalidArgumentError("need at least two replicates")
    s = build_distribution(spec) if isinstance(spec, PiecewiseSpec) else check_distribution(spec)
    d_max = default_dmax(s.shape[1])
    configs = [
        ("preliminary", preliminary_estimator(d_max)),
        ("hybrid_log", hybrid_estimator(LogPracticalPenalty(), d_max)),
        ("hybrid_linear", hybrid_estimator(LinearPenalty(), d_max)),
    ]
    oracle_risk = oracle_partition(s)[1]
    runs = _run_replicates(s, [est for _, est in configs], reps, seed, workers)
    reports = [
        _report(name, [p[0] for p in pairs], [p[1] for p in pairs], oracle_risk)
        for (name, _), pairs in zip(configs, runs)
    ]
    base = reports[0].mean_risk
    return [
        RiskReport(**{**asdict(rep), "baseline_ratio": rep.mean_risk / base}) for rep in reports
    ]


# 0.1 to 4 by 0.1, then 4 to 6 by 0.5; zero is left out since c0 must be positive
CSTAR_GRID = tuple([k / 10 for k in range(1, 41)] + [4.5, 5.0, 5.5, 6.0])


def fixed_estimator(c0: float) -> Estimator:
    def run(seq: CategorySequence):
        fit = fit_preliminary(seq, c0)
        return fit.estimate(), fit.dimension

    return run


def preliminary_study(
    spec: PiecewiseSpec | np.ndarray,
    reps: int,
    seed: int,
    workers: int | None = None,
    grid: Sequence[float] = CSTAR_GRID,
) -> list[RiskReport]:
    """Preliminary estimator with three choices of constant, on common samples.

    Rows: the best fixed constant ``c*`` on ``grid`` (picked after the fact by
    mean risk, so its ratio is optimistic), the fixed fallback constant for
    this alphabet size, and the dimension-jump constant.
    """
    if reps < 2:
        raise InvalidArgumentError("need at least two replicates")
    s = build_distribution(spec) if isinstance(spec, PiecewiseSpec) else check_distribution(spec)
    r, n = s.shape
    grid = [float(c) for c in grid]
    if not grid or min(grid) <= 0:
        raise InvalidArgumentError("grid of positive constants required")
    estimators = [fixed_estimator(c) for c in grid]
    estimators += [fixed_estimator(fallback_c0(r)), preliminary_estimator(default_dmax(n))]
    oracle_risk = oracle_partition(s)[1]
    names = [f"fixed_{c:g}" for c in grid] + [f"fixed_{fallback_c0(r):g}", "jump"]
    runs = _run_replicates(s, estimators, reps, seed, workers)
    reports = [
        _report(name, [p[0] for p in pairs], [p[1] for p in pairs], oracle_risk)
        for name, pairs in zip(names, runs)
    ]
    best = min(range(len(grid)), key=lambda k: reports[k].mean_risk)
    cstar = RiskReport(**{**asdict(reports[best]), "estimator": f"cstar_{grid[best]:g}"})
    return [cstar, reports[-2], reports[-1]]


def reports_to_csv(reports: Sequence[RiskReport]) -> str:
    buf = io.StringIO()
    names = [f.name for f in fields(RiskReport)]
    writer = csv.DictWriter(buf, fieldnames=names, lineterminator="\n")
    writer.writeheader()
    for rep in reports:
        writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in asdict(rep).items()})
    return buf.getvalue()
