"""Greedy dyadic approximation of a smooth matrix and its decay rate."""

import numpy as np

from catseg import adaptive_partition, besov_bound_check, besov_seminorm, e_d, haar_transform, inverse_haar

n = 256
x = np.arange(1, n + 1) / n
t = np.vstack([x**2, 1 - x**2])

coef = haar_transform(t)
print(f"Haar round trip error: {np.abs(inverse_haar(coef) - t).max():.1e}")
print(f"Besov seminorm (alpha=1, p=2): {besov_seminorm(t, 1.0, 2.0):.3f}")

print("\neps      intervals  squared error")
for eps in (0.5, 0.1, 0.02, 0.005):
    run = adaptive_partition(t, eps)
    print(f"{eps:<8} {run.size:9d}  {run.error:.5f}")

print("\nD     E_D")
for D in (1, 4, 16, 64):
    print(f"{D:<5} {e_d(t, D):.5f}")

report = besov_bound_check(t, 1.0, 2.0, [2**k for k in range(8)])
print(f"\nlog-log slope {report.slope:.2f} (rate predicts -2), max ratio {report.max_ratio:.3f}")
print("PASS" if report.passed else "FAIL")
