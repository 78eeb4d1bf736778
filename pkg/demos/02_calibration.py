"""Pick the penalty constant from the data with the dimension jump."""

from catseg import calibrate_c0, default_dmax, dimension_jump, dimension_path, fit_preliminary
from catseg.calibrate import DEFAULT_GRID
from catseg.dyadic_select import selected_dimension
from catseg.sim import analogue_specs, build_distribution, sample_sequence

seq = sample_sequence(build_distribution(analogue_specs()["b"]), seed=3)
d_max = default_dmax(seq.n)

path = dimension_path(seq, DEFAULT_GRID, selected_dimension)
print("c     selected D")
for c, D in path[::3]:
    print(f"{c:.1f}   {D}")

c_hat = dimension_jump(path, d_max)
print(f"\nlargest drop (with D <= {d_max}) right before c = {c_hat:.1f}")

c0 = calibrate_c0(seq, d_max)
print(f"calibrated constant: {c0:.1f}")
print(f"fitted dimension: {fit_preliminary(seq, c0).dimension} (truth: 8)")
