import math

import numpy as np
import pytest

from catseg.core import CategorySequence, InvalidArgumentError, Partition, prefix_counts, segment_cost
from catseg.interval_dp import best_per_dimension, linear_penalty_path, select_with_penalty

from oracles import coarsenings


def random_table(rng, K):
    t = np.full((K + 1, K + 1), np.inf)
    for a in range(K + 1):
        for b in range(a + 1, K + 1):
            t[a, b] = rng.uniform(0, 10)
    return t


def brute(bp, table, penalty=lambda D: 0.0):
    pos = {b: i for i, b in enumerate(bp)}
    out = {}
    for p in coarsenings(bp):
        D = len(p) - 1
        cost = sum(table[pos[a], pos[b]] for a, b in zip(p, p[1:]))
        if D not in out or cost < out[D][0]:
            out[D] = (cost, p)
    return out


def test_only_three_segment_partition():
    s = CategorySequence(np.array([1, 1, 2, 2, 1, 1, 1, 1]), 2)
    pc = prefix_counts(s)
    bp = [1, 3, 5, 9]
    table = best_per_dimension(bp, lambda a, b: segment_cost(pc, a, b), 5)
    expected = segment_cost(pc, 1, 3) + segment_cost(pc, 3, 5) + segment_cost(pc, 5, 9)
    assert table.best_cost(3) == pytest.approx(expected)
    assert table.partition(3) == Partition((1, 3, 5, 9))
    assert table.best_cost(1) == segment_cost(pc, 1, 9)
    assert table.max_dimension == 3


def test_matches_subset_enumeration():
    rng = np.random.default_rng(0)
    for K in range(1, 12):
        bp = sorted(rng.choice(np.arange(2, 200), size=K - 1, replace=False).tolist())
        bp = [1, *bp, 200]
        table = random_table(rng, K)
        ref = brute(bp, table)
        got = best_per_dimension(bp, table, K)
        for D, (cost, p) in ref.items():
            assert got.best_cost(D) == pytest.approx(cost, abs=1e-9)
            assert got.partition(D).breakpoints == p


def test_d_max_caps_and_validates():
    rng = np.random.default_rng(1)
    table = random_table(rng, 6)
    got = best_per_dimension(list(range(1, 8)), table, 3)
    assert got.max_dimension == 3
    with pytest.raises(InvalidArgumentError):
        best_per_dimension(list(range(1, 8)), table, 0)


def test_least_squares_costs_nonincreasing():
    rng = np.random.default_rng(2)
    for _ in range(10):
        s = CategorySequence(rng.integers(1, 4, 128), 3)
        pc = prefix_counts(s)
        bp = [1, *sorted(rng.choice(np.arange(2, 129), size=15, replace=False)), 129]
        table = best_per_dimension(bp, lambda a, b: segment_cost(pc, a, b), 16)
        assert np.all(np.diff(table.costs) <= 1e-12)
        # Bellman optimality: any hand-built partition costs at least as much
        for _ in range(20):
            D = rng.integers(1, 17)
            inner = sorted(rng.choice(bp[1:-1], size=D - 1, replace=False))
            p = [1, *inner, 129]
            cost = sum(segment_cost(pc, a, b) for a, b in zip(p, p[1:]))
            assert table.best_cost(D) <= cost + 1e-9


def test_select_with_penalty_extremes():
    rng = np.random.default_rng(3)
    s = CategorySequence(rng.integers(1, 3, 64), 2)
    pc = prefix_counts(s)
    bp = [1, 9, 17, 33, 41, 65]
    table = best_per_dimension(bp, lambda a, b: segment_cost(pc, a, b), 10)
    part, crit = select_with_penalty(table, lambda D: 0.0)
    assert crit == pytest.approx(table.costs.min())
    assert table.best_cost(part.dimension) == pytest.approx(table.best_cost(5))
    part, _ = select_with_penalty(table, lambda D: 1e9 * D)
    assert part.dimension == 1


def test_select_ties_go_to_smaller_dimension():
    table = np.full((3, 3), np.inf)
    table[0, 2], table[0, 1], table[1, 2] = 2.0, 0.5, 0.5
    per_dim = best_per_dimension([1, 2, 3], table, 2)
    part, crit = select_with_penalty(per_dim, lambda D: 1.0 * D)
    assert part.dimension == 1 and crit == 3.0


def test_log_penalty_matches_brute_force():
    rng = np.random.default_rng(4)
    for _ in range(30):
        K = 4
        bp = [1, 5, 9, 13, 17]
        table = random_table(rng, K)
        pen = lambda D: 1.5 * (2.5 + math.log(K / D)) * D
        ref = min(
            (sum(table[bp.index(a), bp.index(b)] for a, b in zip(p, p[1:])) + pen(len(p) - 1), p)
            for p in coarsenings(bp)
        )
        part, crit = select_with_penalty(best_per_dimension(bp, table, K), pen)
        assert crit == pytest.approx(ref[0], abs=1e-9)
        assert part.breakpoints == ref[1]


def test_linear_path_agrees_with_table():
    rng = np.random.default_rng(5)
    for _ in range(50):
        K = rng.integers(1, 12)
        bp = list(range(1, K + 2))
        table = random_table(rng, K)
        beta = rng.uniform(0.1, 8)
        p1, c1 = linear_penalty_path(bp, table, beta)
        p2, c2 = select_with_penalty(best_per_dimension(bp, table, K), lambda D: beta * D)
        assert c1 == pytest.approx(c2, abs=1e-9)
        assert p1 == p2


def test_linear_path_limits():
    rng = np.random.default_rng(6)
    s = CategorySequence(rng.integers(1, 3, 64), 2)
    pc = prefix_counts(s)
    bp = [1, 9, 17, 33, 41, 65]
    cost = lambda a, b: segment_cost(pc, a, b)
    finest = Partition(tuple(bp))
    assert linear_penalty_path(bp, cost, 1e-12)[0].dimension == best_per_dimension(bp, cost, 5).costs.argmin() + 1
    single = cost(1, 65)
    assert linear_penalty_path(bp, cost, single)[0] == Partition((1, 65))
    # strictly decreasing costs make the finest partition optimal as beta -> 0
    table = np.full((6, 6), np.inf)
    for a in range(6):
        for b in range(a + 1, 6):
            table[a, b] = (b - a) ** 2
    assert linear_penalty_path(bp, table, 1e-9)[0] == finest
