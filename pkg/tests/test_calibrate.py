import numpy as np
import pytest

from catseg.calibrate import (
    DEFAULT_GRID,
    calibrate_c0,
    calibrate_stage2,
    default_dmax,
    dimension_jump,
    dimension_path,
    monotone_nonincreasing,
    stage2_selector,
)
from catseg.core import CalibrationError, CategorySequence, InvalidArgumentError, Partition
from catseg.dyadic_select import fit_preliminary, selected_dimension
from catseg.hybrid import split_even_odd
from catseg.sim import analogue_specs, build_distribution, replicate_seed, sample_sequence


def two_regime(n=1024, p=0.95, seed=0, cut=None):
    cut = cut or n // 2
    s = np.empty((2, n))
    s[:, :cut] = [[p], [1 - p]]
    s[:, cut:] = [[1 - p], [p]]
    return s, sample_sequence(s, seed)


def test_grid_is_zero_to_three():
    assert DEFAULT_GRID[0] == 0.0 and DEFAULT_GRID[-1] == 3.0 and len(DEFAULT_GRID) == 31


def test_default_dmax_anchors():
    assert default_dmax(1024) == 30
    assert default_dmax(4096) == 100
    assert default_dmax(8192) == 175
    assert default_dmax(2048) == int(2048 / np.log(2048) ** 2)
    assert default_dmax(2) == 2


def test_dimension_path_constant_sequence():
    x = CategorySequence(np.ones(256, dtype=int), 3)
    path = dimension_path(x, DEFAULT_GRID, selected_dimension)
    assert [d for _, d in path] == [1] * 31


def test_dimension_path_validation():
    x = CategorySequence(np.ones(4, dtype=int), 2)
    with pytest.raises(InvalidArgumentError):
        dimension_path(x, [], selected_dimension)
    with pytest.raises(InvalidArgumentError):
        dimension_path(x, [0.2, 0.1], selected_dimension)
    with pytest.raises(InvalidArgumentError):
        dimension_path(x, [-0.1, 0.1], selected_dimension)


def test_zero_constant_gives_largest_dimension():
    rng = np.random.default_rng(0)
    for _ in range(5):
        x = CategorySequence(rng.integers(1, 5, 512), 4)
        path = dimension_path(x, DEFAULT_GRID, selected_dimension)
        assert path[0][1] == max(d for _, d in path)
        assert monotone_nonincreasing(path)


def test_path_monotone_on_analogue_specs():
    for spec in analogue_specs().values():
        s = build_distribution(spec)
        x = sample_sequence(s, 3)
        assert monotone_nonincreasing(dimension_path(x, DEFAULT_GRID, selected_dimension))


def test_two_regime_plateau():
    _, x = two_regime()
    path = dimension_path(x, DEFAULT_GRID, selected_dimension)
    assert sum(d == 2 for _, d in path) >= 0.5 * len(path)


def test_parallel_path_is_identical():
    _, x = two_regime(seed=4)
    serial = dimension_path(x, DEFAULT_GRID, selected_dimension)
    assert dimension_path(x, DEFAULT_GRID, selected_dimension, workers=4) == serial


def test_dimension_jump_examples():
    path = list(zip([0, 0.1, 0.2, 0.3, 0.4, 0.5], [32, 32, 8, 8, 2, 2]))
    assert dimension_jump(path, 30) == 0.2
    assert dimension_jump(list(zip([0, 0.5, 1.0], [9, 9, 3])), 30) == 1.0
    with pytest.raises(CalibrationError):
        dimension_jump(list(zip([0, 0.1, 0.2], [50, 45, 40])), 30)


def test_dimension_jump_constraint_and_ties():
    # the biggest drop lands above d_max, so the next admissible one wins
    path = list(zip([0, 0.1, 0.2, 0.3], [100, 40, 25, 20]))
    assert dimension_jump(path, 30) == 0.2
    path = list(zip([0, 0.1, 0.2, 0.3], [20, 10, 10, 0]))
    assert dimension_jump(path, 30) == 0.1


def test_calibrate_doubles_jump_point():
    _, x = two_regime(p=0.8, seed=1, cut=300)
    path = dimension_path(x, DEFAULT_GRID, selected_dimension)
    assert calibrate_c0(x, 30) == 2 * dimension_jump(path, 30)


def test_calibrate_invariant_to_relabeling():
    rng = np.random.default_rng(2)
    for spec in ("b", "f"):
        s = build_distribution(analogue_specs()[spec])
        x = sample_sequence(s, 5)
        perm = rng.permutation(x.r) + 1
        relabeled = CategorySequence(perm[x.values - 1], x.r)
        assert calibrate_c0(relabeled, 30) == calibrate_c0(x, 30)


def test_deterministic_two_regime():
    values = np.where(np.arange(1024) < 512, 1, 2)
    x = CategorySequence(values, 2)
    c0 = calibrate_c0(x, 30)
    fit = fit_preliminary(x, c0)
    assert c0 > 0 and fit.dimension == 2
    assert np.all(fit.estimate() == np.eye(2)[:, values - 1])

    # a change at 300 is off the dyadic grid: exactly one block straddles it
    values = np.where(np.arange(1024) < 300, 1, 2)
    x = CategorySequence(values, 2)
    c0 = calibrate_c0(x, 30)
    fit = fit_preliminary(x, c0)
    assert 0 < c0 < np.inf and 2 < fit.dimension <= 30
    mixed = [(a, b) for a, b in fit.partition.segments() if len(set(values[a - 1 : b - 1])) > 1]
    assert len(mixed) == 1 and mixed[0][0] <= 300 < mixed[0][1] - 1


@pytest.mark.parametrize("r, lo, hi", [(2, 1.6, 3.2), (4, 1.9, 3.9)])
def test_calibrated_constants_near_reported_range(r, lo, hi):
    # reported averages: 2.2-2.6 for r = 2 and 2.5-3.3 for r = 4
    for name, spec in analogue_specs().items():
        if spec.r != r:
            continue
        s = build_distribution(spec)
        vals = [calibrate_c0(sample_sequence(s, replicate_seed(11, i)), 30) for i in range(20)]
        assert lo <= np.mean(vals) <= hi, name


def test_stage2_degenerate_base():
    x = CategorySequence(np.ones(64, dtype=int), 2)
    assert calibrate_stage2(x, Partition.single(64), "linear", 30) == 0.0


def test_stage2_strong_two_regime():
    _, x = two_regime(p=0.97, seed=3)
    even, odd = split_even_odd(x)
    base = fit_preliminary(even, 2.0).partition
    for form in ("linear", "log_practical"):
        beta = calibrate_stage2(odd, base, form, 30)
        assert stage2_selector(odd, base, form, 30)(beta).dimension == 2


def test_stage2_forms_land_on_plateau():
    s = build_distribution(analogue_specs()["g"])
    for seed in range(3):
        x = sample_sequence(s, seed)
        even, odd = split_even_odd(x)
        base = fit_preliminary(even, calibrate_c0(even, 30)).partition
        linear = stage2_selector(odd, base, "linear", 30)
        path = dimension_path(odd, DEFAULT_GRID, lambda _, c: linear(c).dimension)
        dims = [d for _, d in path]
        for form in ("linear", "log_practical"):
            beta = calibrate_stage2(odd, base, form, 30)
            D = stage2_selector(odd, base, form, 30)(beta).dimension
            assert min(dims) <= D <= max(dims[1:])


def test_stage2_unknown_form():
    x = CategorySequence(np.ones(8, dtype=int), 2)
    with pytest.raises(InvalidArgumentError):
        calibrate_stage2(x, Partition((1, 5, 9)), "quadratic", 30)
