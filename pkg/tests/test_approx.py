import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize

from catseg.approx import adaptive_partition, besov_bound_check, e2_error, e_d, e_d_curve, error_table
from catseg.core import (
    DegenerateInputError,
    DyadicInterval,
    InvalidArgumentError,
    Partition,
)

from oracles import dyadic_intervals, incidence


def ramp(n):
    x = np.arange(1, n + 1) / n
    return np.vstack([x, 1 - x])


def piecewise(n, cuts, levels):
    t = np.zeros((2, n))
    for (a, b), p in zip(Partition((1, *cuts, n + 1)).segments(), levels):
        t[:, a - 1 : b - 1] = [[p], [1 - p]]
    return t


def greedy_reference(t, eps, a=1, b=None):
    # plain recursion on bounds, independent of the level tables
    b = t.shape[1] + 1 if b is None else b
    block = t[:, a - 1 : b - 1]
    err = np.sqrt(np.sum((block - block.mean(axis=1, keepdims=True)) ** 2))
    if err <= eps or b - a == 1:
        return [a]
    mid = (a + b) // 2
    return greedy_reference(t, eps, a, mid) + greedy_reference(t, eps, mid, b)


def block_sq_error(t, a, b):
    block = t[:, a - 1 : b - 1]
    return float(np.sum((block - block.mean(axis=1, keepdims=True)) ** 2))


def sq_errors(t, part):
    return sum(block_sq_error(t, a, b) for a, b in part.segments())


# -- E2 ---------------------------------------------------------------------


def test_e2_examples():
    t = np.array([[0.0, 1.0, 0.0, 1.0]])
    assert e2_error(t, DyadicInterval(0, 0)) == pytest.approx(1.0)
    assert e2_error(t, DyadicInterval(1, 0)) == pytest.approx(np.sqrt(0.5))
    assert e2_error(t, DyadicInterval(2, 3)) == 0.0
    assert e2_error(np.full((3, 8), 1 / 3), DyadicInterval(0, 0)) == 0.0


def test_e2_is_minimum_over_constants():
    rng = np.random.default_rng(0)
    for _ in range(10):
        t = rng.dirichlet(np.ones(3), size=16).T
        I = DyadicInterval(1, 1)
        a, b = I.bounds(16)
        block = t[:, a - 1 : b - 1]
        res = minimize(lambda c: np.sum((block - c[:, None]) ** 2), np.zeros(3), tol=1e-12)
        assert e2_error(t, I) == pytest.approx(np.sqrt(res.fun), abs=1e-6)


def test_error_table_shape():
    table = error_table(ramp(16))
    assert [len(level) for level in table] == [1, 2, 4, 8, 16]
    assert np.all(table[-1] == 0)


# -- adaptive refinement ----------------------------------------------------


def test_adaptive_examples():
    t = piecewise(16, (9,), (0.2, 0.7))
    run = adaptive_partition(t, 1e-6)
    assert run.partition == Partition((1, 9, 17))
    assert run.error == 0.0
    assert adaptive_partition(t, 100.0).partition == Partition.single(16)
    assert adaptive_partition(np.full((2, 8), 0.5), 1e-9).partition == Partition.single(8)


def test_adaptive_off_grid_change():
    t = piecewise(16, (6,), (0.2, 0.7))
    assert adaptive_partition(t, 1e-6).partition == Partition((1, 5, 6, 7, 9, 17))


def test_adaptive_validation():
    with pytest.raises(InvalidArgumentError):
        adaptive_partition(ramp(8), 0.0)
    with pytest.raises(InvalidArgumentError):
        adaptive_partition(ramp(8), 0.1, schedule="random")


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 6).flatmap(
        lambda N: st.lists(st.floats(0, 1), min_size=2**N, max_size=2**N)
    ),
    st.floats(1e-4, 2.0),
)
def test_adaptive_matches_reference_and_bound(values, eps):
    t = np.vstack([values, 1 - np.array(values)])
    run = adaptive_partition(t, eps)
    assert list(run.partition.breakpoints[:-1]) == greedy_reference(t, eps)
    assert adaptive_partition(t, eps, "dfs").partition == run.partition
    assert np.all(run.segment_errors <= eps)
    assert run.error <= run.size * eps**2 + 1e-12
    assert run.error == pytest.approx(sq_errors(t, run.partition), abs=1e-12)


def test_size_monotone_in_eps():
    rng = np.random.default_rng(1)
    t = rng.dirichlet(np.ones(4), size=128).T
    sizes = [adaptive_partition(t, eps).size for eps in np.geomspace(1e-3, 5, 40)]
    assert all(a >= b for a, b in zip(sizes, sizes[1:]))


# -- E_D --------------------------------------------------------------------


def test_e_d_examples():
    t = np.array([[0.0, 1.0, 0.0, 1.0]])
    # the sweep reaches {whole} with eps = 1 and the 4 singletons as eps -> 0
    assert e_d(t, 1) == pytest.approx(1.0)
    assert e_d(t, 2) == pytest.approx(1.0)
    assert e_d(t, 3) == pytest.approx(1.0)
    assert e_d(t, 4) == 0.0


def test_e_d_two_pieces():
    t = piecewise(16, (9,), (0.25, 0.75))
    root = e2_error(t, DyadicInterval(0, 0))
    assert e_d(t, 1) == pytest.approx(root**2)
    assert e_d_curve(t, [2, 5, 16]).tolist() == [0.0, 0.0, 0.0]


def test_e_d_validation():
    with pytest.raises(InvalidArgumentError):
        e_d(ramp(8), 0)
    with pytest.raises(InvalidArgumentError):
        e_d(ramp(8), 9)
    with pytest.raises(InvalidArgumentError):
        e_d(ramp(6), 2)


def test_e_d_matches_eps_grid_search():
    rng = np.random.default_rng(2)
    for _ in range(5):
        t = rng.dirichlet(np.ones(2), size=32).T
        grid = np.geomspace(1e-4, 3, 3000)
        runs = [(adaptive_partition(t, eps).size, eps) for eps in grid]
        for D in (1, 2, 4, 7, 16):
            approx = min(size * eps**2 for size, eps in runs if size <= D)
            exact = e_d(t, D)
            # the grid can only do worse than the exact infimum
            assert exact <= approx + 1e-12
            assert approx <= exact * 1.01 + 1e-12


@pytest.mark.parametrize("n", [16, 32])
def test_e_d_dominates_best_dyadic_error(n):
    rng = np.random.default_rng(n)
    parts, mat = incidence(n)
    dims = np.array([p.dimension for p in parts])
    for _ in range(3):
        t = rng.dirichlet(np.ones(3), size=n).T
        per_interval = [block_sq_error(t, a, b) for a, b in dyadic_intervals(n)]
        errs = mat.astype(float) @ np.array(per_interval)
        for D in (1, 2, 3, 5, 8, n // 2):
            assert errs[dims <= D].min() <= e_d(t, D) + 1e-12


def test_e_d_curve_properties():
    rng = np.random.default_rng(3)
    for _ in range(5):
        t = rng.dirichlet(np.ones(3), size=64).T
        curve = e_d_curve(t, range(1, 65))
        assert np.all(np.diff(curve) <= 1e-15)
        assert curve[-1] == 0.0
        assert curve[0] == pytest.approx(e2_error(t, DyadicInterval(0, 0)) ** 2)


# -- Besov check ------------------------------------------------------------


def test_besov_piecewise_constant_passes_trivially():
    t = piecewise(256, (129,), (0.1, 0.9))
    rep = besov_bound_check(t, 1.0, 2.0, [1, 2, 4, 8])
    assert rep.passed
    assert rep.ratios[1:].tolist() == [0.0, 0.0, 0.0]
    assert rep.slope == float("-inf")


def test_besov_ramp_rate():
    rep = besov_bound_check(ramp(256), 1.0, 2.0, range(1, 129))
    assert rep.passed
    assert rep.slope <= -1.5
    assert np.all(np.isfinite(rep.ratios))
    assert len(rep.rows()) == 128


def test_besov_noise_ratios_bounded():
    rng = np.random.default_rng(4)
    t = rng.dirichlet(np.ones(2), size=256).T
    rep = besov_bound_check(t, 1.0, 2.0, [1, 2, 4, 8, 16, 32, 64])
    assert np.isfinite(rep.max_ratio)
    assert np.all(rep.ratios >= 0)


def test_besov_constant_is_degenerate():
    with pytest.raises(DegenerateInputError):
        besov_bound_check(np.full((2, 64), 0.5), 1.0, 2.0, [1, 2])
