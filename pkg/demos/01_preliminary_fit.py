"""Fit the preliminary estimator to a sampled DNA-like sequence."""

import numpy as np

from catseg import CategorySequence, build_graph, fit_preliminary, prefix_counts, shortest_path_select
from catseg.sim import analogue_specs, build_distribution, sample_sequence

# A four-letter alphabet with five regimes
spec = analogue_specs()["g"]
s = build_distribution(spec)
seq = sample_sequence(s, seed=1)
print(f"n = {seq.n}, r = {seq.r}, true change-points at {spec.breakpoints.breakpoints[1:-1]}")

fit = fit_preliminary(seq, c0=3.0)
print(f"\n{fit.dimension} segments, criterion {fit.criterion:.2f}")
for (a, b), probs in zip(fit.partition.segments(), fit.segment_probs):
    print(f"  [{a:4d}, {b:4d})  " + "  ".join(f"{p:.2f}" for p in probs))

# The same answer through the explicit graph: 2n - 1 dyadic edges
g = build_graph(prefix_counts(seq), 3.0)
print(f"\ngraph has {len(g.edges())} edges; same partition: {shortest_path_select(g) == fit.partition}")

# Squared error of the estimate against the truth
print(f"squared error: {np.sum((s - fit.estimate()) ** 2):.2f}")

# A tiny hand-made case
tiny = CategorySequence(np.array([1, 1, 2, 2]), 2)
print("\n1 1 2 2 with c0=1:", fit_preliminary(tiny, 1.0).partition.breakpoints)
print("1 1 2 2 with c0=3:", fit_preliminary(tiny, 3.0).partition.breakpoints)
