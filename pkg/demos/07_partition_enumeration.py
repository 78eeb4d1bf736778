"""Counting dyadic partitions, and the best coarsening of a breakpoint set."""

from collections import Counter

import numpy as np

from catseg import best_per_dimension, enumerate_dyadic_partitions, linear_penalty_path, select_with_penalty

for n in (4, 8, 16):
    counts = Counter(p.dimension for p in enumerate_dyadic_partitions(n))
    print(f"n = {n:2d}: " + ", ".join(f"D={D}: {counts[D]}" for D in sorted(counts)))

# Costs of merging blocks of a 6-piece breakpoint set
rng = np.random.default_rng(0)
bp = [1, 9, 17, 33, 41, 57, 65]
cost = np.full((7, 7), np.inf)
for a in range(7):
    for b in range(a + 1, 7):
        cost[a, b] = (b - a) ** 1.5 + rng.uniform(0, 1)

table = best_per_dimension(bp, cost, 6)
print("\nD  best cost  partition")
for D in range(1, 7):
    print(f"{D}  {table.best_cost(D):9.3f}  {table.partition(D).breakpoints}")

print("\nlinear penalty 2D via the table:", select_with_penalty(table, lambda D: 2.0 * D)[0].breakpoints)
print("linear penalty 2D, direct pass: ", linear_penalty_path(bp, cost, 2.0)[0].breakpoints)
