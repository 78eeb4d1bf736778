"""Two-stage estimator: dyadic selection, then merging of useless breakpoints."""

import numpy as np

from catseg import HybridConfig, LinearPenalty, LogPracticalPenalty, calibrate_c0, fit_hybrid, fit_preliminary
from catseg.sim import analogue_specs, build_distribution, sample_sequence

spec = analogue_specs()["a"]
s = build_distribution(spec)
seq = sample_sequence(s, seed=5)
print("true breakpoints:", spec.breakpoints.breakpoints)

prelim = fit_preliminary(seq, calibrate_c0(seq))
print(f"\npreliminary: D = {prelim.dimension}, error {np.sum((s - prelim.estimate()) ** 2):.2f}")

for penalty in (LinearPenalty(), LogPracticalPenalty()):
    res = fit_hybrid(seq, HybridConfig(penalty=penalty))
    err = np.sum((s - res.assembled) ** 2)
    print(f"\n{type(penalty).__name__} (beta = {res.penalty.beta:.2f})")
    print(f"  stage 1 on even positions: D = {res.stage1.dimension}")
    print(f"  stage 2 on odd positions:  D = {res.dimension}, breakpoints {res.partition.breakpoints}")
    print(f"  error {err:.2f}")
