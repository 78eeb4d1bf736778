"""Domain types and small numerical building blocks.

Conventions used throughout the package:

* category labels are 1-based integers in ``1..r``;
* positions are 1-based and segments are half-open, ``[i, j)`` covers
  ``i, ..., j - 1``;
* a matrix ``t`` of shape ``(r, n)`` holds one column per position, so a
  distribution matrix has probability vectors as columns.

The indicator matrix of a sequence is never built. Segment statistics come
from cumulative counts, using ``|I| - ||c||^2 / |I|`` for the least-squares
cost of a segment with count vector ``c``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np
from numba import njit


class InvalidArgumentError(ValueError):
    """Raised when an argument violates a documented precondition."""


class ResourceLimitError(RuntimeError):
    """Raised when an exhaustive computation would be too large."""


class CalibrationError(RuntimeError):
    """Raised when the dimension-jump heuristic cannot pick a constant."""


class DegenerateInputError(ValueError):
    """Raised when an input makes a diagnostic meaningless."""


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def log2_exact(n: int) -> int:
    """Return ``N`` with ``n == 2**N`` or raise :class:`InvalidArgumentError`."""
    if not is_power_of_two(int(n)):
        raise InvalidArgumentError(f"length {n} is not a power of two")
    return int(n).bit_length() - 1


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CategorySequence:
    """Observed labels ``Y_1..Y_n`` with values in ``1..r``."""

    values: np.ndarray
    r: int

    def __post_init__(self):
        values = np.array(self.values, dtype=np.int64).reshape(-1)
        r = int(self.r)
        if r < 2:
            raise InvalidArgumentError(f"alphabet size must be >= 2, got {r}")
        if values.size < 1:
            raise InvalidArgumentError("sequence must not be empty")
        if values.min() < 1 or values.max() > r:
            raise InvalidArgumentError(f"labels must lie in 1..{r}")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "r", r)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.n

    def indicator(self) -> np.ndarray:
        """Dense ``r x n`` indicator matrix. Only meant for small checks."""
        x = np.zeros((self.r, self.n))
        x[self.values - 1, np.arange(self.n)] = 1.0
        return x


@dataclass(frozen=True)
class PrefixCounts:
    """Cumulative counts, ``table[i, l] = #{k <= i : Y_k = l + 1}``."""

    table: np.ndarray

    @property
    def n(self) -> int:
        return self.table.shape[0] - 1

    @property
    def r(self) -> int:
        return self.table.shape[1]

    def counts(self, i: int, j: int) -> np.ndarray:
        """Per-category counts on ``[i, j)``."""
        _check_segment(i, j, self.n)
        return self.table[j - 1] - self.table[i - 1]


@dataclass(frozen=True)
class DyadicInterval:
    """Node ``(j, k)`` of the dyadic tree; covers ``k*2^(N-j)+1 .. (k+1)*2^(N-j)``."""

    j: int
    k: int

    def __post_init__(self):
        if self.j < 0 or not 0 <= self.k < 2**self.j:
            raise InvalidArgumentError(f"invalid dyadic node ({self.j}, {self.k})")

    def length(self, n: int) -> int:
        N = log2_exact(n)
        if self.j > N:
            raise InvalidArgumentError(f"level {self.j} exceeds depth {N}")
        return 2 ** (N - self.j)

    def bounds(self, n: int) -> tuple[int, int]:
        """Half-open 1-based bounds ``(start, end)``."""
        size = self.length(n)
        return self.k * size + 1, (self.k + 1) * size + 1

    def children(self) -> tuple["DyadicInterval", "DyadicInterval"]:
        return DyadicInterval(self.j + 1, 2 * self.k), DyadicInterval(self.j + 1, 2 * self.k + 1)

    @classmethod
    def from_bounds(cls, start: int, end: int, n: int) -> "DyadicInterval":
        N = log2_exact(n)
        size = end - start
        if not is_power_of_two(size) or (start - 1) % size or end > n + 1:
            raise InvalidArgumentError(f"[{start}, {end}) is not a dyadic interval of 1..{n}")
        return cls(N - (size.bit_length() - 1), (start - 1) // size)


@dataclass(frozen=True)
class Partition:
    """Ordered breakpoints ``1 = i_1 < ... < i_{D+1} = n + 1``."""

    breakpoints: tuple[int, ...]

    def __post_init__(self):
        bp = tuple(int(b) for b in self.breakpoints)
        if len(bp) < 2 or bp[0] != 1:
            raise InvalidArgumentError("breakpoints must start at 1 and hold at least two values")
        if any(b >= c for b, c in zip(bp, bp[1:])):
            raise InvalidArgumentError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", bp)

    @classmethod
    def single(cls, n: int) -> "Partition":
        return cls((1, n + 1))

    @property
    def n(self) -> int:
        return self.breakpoints[-1] - 1

    @property
    def dimension(self) -> int:
        return len(self.breakpoints) - 1

    def segments(self) -> Iterator[tuple[int, int]]:
        return zip(self.breakpoints[:-1], self.breakpoints[1:])

    def is_dyadic(self) -> bool:
        if not is_power_of_two(self.n):
            return False
        for a, b in self.segments():
            size = b - a
            if not is_power_of_two(size) or (a - 1) % size:
                return False
        return True

    def refines(self, other: "Partition") -> bool:
        """True when every breakpoint of ``other`` is a breakpoint of ``self``."""
        return self.n == other.n and set(other.breakpoints) <= set(self.breakpoints)

    def labels(self) -> np.ndarray:
        """Segment index (0-based) of each position."""
        return np.repeat(np.arange(self.dimension), np.diff(self.breakpoints))


@dataclass(frozen=True)
class FitResult:
    """Outcome of a penalized least-squares selection."""

    partition: Partition
    segment_probs: np.ndarray
    criterion: float
    penalty_constant: float
    dimension: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "dimension", self.partition.dimension)

    def estimate(self) -> np.ndarray:
        """The fitted ``r x n`` matrix, each column its segment's frequencies."""
        return self.segment_probs[self.partition.labels()].T


@dataclass(frozen=True)
class HaarCoefficients:
    """Haar coefficients of an ``r x n`` matrix.

    ``beta[:, 0]`` holds the coefficient of the constant vector, index
    ``(-1, 0)``; ``beta[:, 2**j + k]`` holds node ``(j, k)``.
    """

    beta: np.ndarray

    @property
    def n(self) -> int:
        return self.beta.shape[1]

    def __getitem__(self, lam: tuple[int, int]) -> np.ndarray:
        j, k = lam
        if j == -1:
            return self.beta[:, 0]
        return self.beta[:, 2**j + k]

    def level(self, j: int) -> np.ndarray:
        """Coefficients at level ``j`` as an ``r x 2^j`` block."""
        return self.beta[:, 2**j : 2 ** (j + 1)]

    def keys(self) -> list[tuple[int, int]]:
        N = log2_exact(self.n)
        return [(-1, 0)] + [(j, k) for j in range(N) for k in range(2**j)]


# ---------------------------------------------------------------------------
# Validation helpers
# ---------------------------------------------------------------------------


def as_sequence(seq, r: int | None = None) -> CategorySequence:
    if isinstance(seq, CategorySequence):
        return seq
    values = np.asarray(seq, dtype=np.int64)
    return CategorySequence(values, int(r) if r is not None else max(2, int(values.max())))


def check_distribution(s, tol: float = 1e-9) -> np.ndarray:
    """Return ``s`` as a float array after checking it is column-stochastic."""
    s = np.asarray(s, dtype=float)
    if s.ndim != 2:
        raise InvalidArgumentError("a distribution matrix must be two-dimensional")
    if np.any(s < -tol) or np.any(s > 1 + tol):
        raise InvalidArgumentError("distribution entries must lie in [0, 1]")
    if np.any(np.abs(s.sum(axis=0) - 1.0) > tol):
        raise InvalidArgumentError("distribution columns must sum to 1")
    return s


def _check_segment(i: int, j: int, n: int) -> None:
    if not 1 <= i < j <= n + 1:
        raise InvalidArgumentError(f"segment [{i}, {j}) is empty or outside 1..{n + 1}")


# ---------------------------------------------------------------------------
# Segment statistics
# ---------------------------------------------------------------------------


def prefix_counts(seq: CategorySequence) -> PrefixCounts:
    table = np.zeros((seq.n + 1, seq.r), dtype=np.int64)
    table[np.arange(1, seq.n + 1), seq.values - 1] = 1
    np.cumsum(table, axis=0, out=table)
    table.flags.writeable = False
    return PrefixCounts(table)


def segment_mean(pc: PrefixCounts, i: int, j: int) -> np.ndarray:
    """Empirical category frequencies on ``[i, j)``."""
    return pc.counts(i, j) / (j - i)


def segment_cost(pc: PrefixCounts, i: int, j: int) -> float:
    """Least-squares cost ``sum_k ||X_k - mean||^2`` over ``[i, j)``."""
    c = pc.counts(i, j)
    size = j - i
    return float(size - int(c @ c) / size)


def partition_cost(pc: PrefixCounts, partition: Partition) -> float:
    return sum(segment_cost(pc, a, b) for a, b in partition.segments())


def segment_cost_table(pc: PrefixCounts, breakpoints: Sequence[int]) -> np.ndarray:
    """Costs of all segments ``[b_a, b_b)`` with ``a < b``; ``inf`` elsewhere."""
    bp = np.asarray(breakpoints, dtype=np.int64)
    c = pc.table[bp - 1].astype(np.int64)
    diff = c[None, :, :] - c[:, None, :]
    size = (bp[None, :] - bp[:, None]).astype(float)
    sq = np.einsum("abl,abl->ab", diff, diff).astype(float)
    with np.errstate(divide="ignore", invalid="ignore"):
        table = size - sq / size
    table[size <= 0] = np.inf
    return table


@njit(cache=True, nogil=True)
def _flat_level_costs(table):
    # block sizes 1, 2, 4, ... in turn, blocks left to right within a size
    n = table.shape[0] - 1
    r = table.shape[1]
    out = np.empty(2 * n - 1)
    pos = 0
    size = 1
    while size <= n:
        for k in range(n // size):
            sq = 0
            for l in range(r):
                c = table[(k + 1) * size, l] - table[k * size, l]
                sq += c * c
            out[pos] = size - sq / size
            pos += 1
        size *= 2
    return out


def flat_level_costs(pc: PrefixCounts) -> np.ndarray:
    """Least-squares costs of all ``2n - 1`` dyadic intervals in one array,
    ordered by block size, then by position."""
    log2_exact(pc.n)
    return _flat_level_costs(pc.table)


def dyadic_level_costs(pc: PrefixCounts) -> list[np.ndarray]:
    """Least-squares costs of all dyadic intervals, grouped by block size.

    Entry ``h`` holds the ``n >> h`` blocks of length ``2**h`` in order.
    """
    flat = flat_level_costs(pc)
    sizes = [pc.n >> h for h in range(log2_exact(pc.n) + 1)]
    return np.split(flat, np.cumsum(sizes)[:-1])


# ---------------------------------------------------------------------------
# Haar basis and Besov seminorm
# ---------------------------------------------------------------------------


def haar_transform(t) -> HaarCoefficients:
    t = np.atleast_2d(np.asarray(t, dtype=float))
    n = t.shape[1]
    N = log2_exact(n)
    beta = np.empty_like(t)
    approx = t
    for j in range(N - 1, -1, -1):
        left, right = approx[:, 0::2], approx[:, 1::2]
        beta[:, 2**j : 2 ** (j + 1)] = (left - right) / np.sqrt(2.0)
        approx = (left + right) / np.sqrt(2.0)
    beta[:, 0] = approx[:, 0]
    return HaarCoefficients(beta)


def inverse_haar(h: HaarCoefficients) -> np.ndarray:
    beta = h.beta
    N = log2_exact(beta.shape[1])
    approx = beta[:, :1]
    for j in range(N):
        detail = beta[:, 2**j : 2 ** (j + 1)]
        nxt = np.empty((beta.shape[0], 2 ** (j + 1)))
        nxt[:, 0::2] = (approx + detail) / np.sqrt(2.0)
        nxt[:, 1::2] = (approx - detail) / np.sqrt(2.0)
        approx = nxt
    return approx


def haar_basis_vector(n: int, lam: tuple[int, int]) -> np.ndarray:
    """The Haar function of index ``lam`` evaluated at ``i = 1..n``."""
    log2_exact(n)
    j, k = lam
    if j == -1:
        return np.full(n, 1.0 / np.sqrt(n))
    x = 2.0**j * np.arange(1, n + 1) / n - k
    phi = np.where((x > 0) & (x <= 0.5), 1.0, np.where((x > 0.5) & (x <= 1), -1.0, 0.0))
    return 2.0 ** (j / 2) / np.sqrt(n) * phi


def besov_seminorm(t, alpha: float, p: float) -> float:
    """Level-weighted l_p norm of the detail coefficients of ``t``.

    A matrix lies in the Besov body of radius ``R`` iff the returned value
    is at most ``sqrt(n) * R``.
    """
    if alpha <= 0 or not 0 < p <= 2:
        raise InvalidArgumentError("need alpha > 0 and p in (0, 2]")
    h = haar_transform(t)
    N = log2_exact(h.n)
    total = 0.0
    for j in range(N):
        norms = np.linalg.norm(h.level(j), axis=0)
        total += 2.0 ** (j * p * (alpha + 0.5 - 1.0 / p)) * np.sum(norms**p)
    return float(total ** (1.0 / p))


# ---------------------------------------------------------------------------
# Simplex projection
# ---------------------------------------------------------------------------


def project_to_simplex(t) -> np.ndarray:
    """Euclidean projection of each column onto the probability simplex."""
    t = np.asarray(t, dtype=float)
    squeeze = t.ndim == 1
    t = np.atleast_2d(t.T).T if squeeze else t
    r = t.shape[0]
    u = -np.sort(-t, axis=0)
    css = np.cumsum(u, axis=0) - 1.0
    ind = np.arange(1, r + 1)[:, None]
    cond = u - css / ind > 0
    rho = r - 1 - np.argmax(cond[::-1], axis=0)
    theta = css[rho, np.arange(t.shape[1])] / (rho + 1)
    out = np.maximum(t - theta, 0.0)
    return out[:, 0] if squeeze else out


# ---------------------------------------------------------------------------
# Exhaustive enumeration (test oracle)
# ---------------------------------------------------------------------------

MAX_ENUMERATION_LENGTH = 32


def enumerate_dyadic_partitions(n: int) -> list[Partition]:
    """Every partition of ``1..n`` into dyadic intervals, each once.

    The count grows like ``T(2n) = 1 + T(n)^2`` (458330 partitions at
    ``n = 32``), so lengths above 32 raise :class:`ResourceLimitError`.
    """
    log2_exact(n)
    if n > MAX_ENUMERATION_LENGTH:
        raise ResourceLimitError(
            f"exhaustive enumeration is limited to n <= {MAX_ENUMERATION_LENGTH}, got {n}"
        )
    return [Partition(bp + (n + 1,)) for bp in _dyadic_breakpoints(1, n)]


def _dyadic_breakpoints(start: int, size: int) -> list[tuple[int, ...]]:
    # left breakpoints of every dyadic partition of [start, start + size)
    out = [(start,)]
    if size > 1:
        half = size // 2
        left = _dyadic_breakpoints(start, half)
        right = _dyadic_breakpoints(start + half, half)
        out.extend(a + b for a in left for b in right)
    return out


def dyadic_partition_counts(n: int) -> dict[int, int]:
    """Number of dyadic partitions of ``1..n`` per dimension, by recursion."""
    N = log2_exact(n)
    counts = {1: 1}
    for _ in range(N):
        merged = {1: 1}
        for d1, c1 in counts.items():
            for d2, c2 in counts.items():
                merged[d1 + d2] = merged.get(d1 + d2, 0) + c1 * c2
        counts = merged
    return dict(sorted(counts.items()))
