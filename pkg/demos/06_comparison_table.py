"""Preliminary against hybrid estimators on the eight shipped distributions.

A small number of replicates keeps this quick; the acceptance suite runs 500.
"""

from catseg.sim import analogue_specs, comparison_table

print("spec  true D  Q prelim  D prelim  D hyb-lin  Q hyb-lin/prelim")
for name, spec in analogue_specs().items():
    prelim, _, linear = comparison_table(spec, reps=20, seed=0)
    D = spec.true_dimension or "-"
    print(
        f"{name:<5} {D!s:<7} {prelim.ratio:<9.2f} {prelim.mean_dimension:<9.1f} "
        f"{linear.mean_dimension:<10.1f} {linear.baseline_ratio:.2f}"
    )
