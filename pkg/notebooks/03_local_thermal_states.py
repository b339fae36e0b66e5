"""
Global versus local thermal states
==================================

Put the whole ring in a canonical state and compare it with the product of
canonical states of the groups, for a small sweep of random couplings.
"""

# %%
import math

from thermoscale import ExperimentConfig, run_sweep

config = ExperimentConfig(realizations=10)
sweep = run_sweep(config)

# %%
print("   N  beta*lam  sqrt(N)/(beta*lam)  mean dist")
for (N, bl), d in sweep.summary.dist_mean.items():
    print(f"{N:4d}  {bl:8.1f}  {math.sqrt(N) / bl:18.2f}  {d:9.4f}")

# %%
# The distance falls as the groups grow, at every temperature.
print("fraction of (realization, beta) pairs with dist decreasing in N:",
      sweep.summary.dist_monotone_fraction)
