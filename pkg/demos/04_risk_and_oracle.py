"""Exact risk of a fixed partition, the oracle, and a Monte Carlo check."""

import numpy as np

from catseg import Partition, exact_model_risk, fit_preliminary, oracle_partition
from catseg.sim import monte_carlo_risk

n = 256
x = np.arange(1, n + 1) / n
s = np.vstack([0.2 + 0.6 * x, 0.8 - 0.6 * x])

for D in (1, 4, 16, 64):
    m = Partition(tuple(np.linspace(1, n + 1, D + 1).astype(int)))
    print(f"regular partition, D = {D:3d}: exact risk {exact_model_risk(s, m):.3f}")

m_star, risk_star = oracle_partition(s)
print(f"\noracle: D = {m_star.dimension}, risk {risk_star:.3f}")



def preliminary(seq):
    fit = fit_preliminary(seq, 2.0)
    return fit.estimate(), fit.dimension


report = monte_carlo_risk(s, preliminary, reps=200, seed=0)
print(f"preliminary with c0 = 2: risk {report.mean_risk:.3f} +- {report.std_error:.3f}")
print(f"ratio to oracle: {report.ratio:.2f}, mean dimension {report.mean_dimension:.1f}")
