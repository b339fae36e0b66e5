"""
Interaction strength between groups
===================================

Split an 8-spin ring into groups of N neighbouring spins and compare the RMS
coupling between groups to the RMS spread of the whole spectrum.
"""

# %%
import math

import numpy as np

from thermoscale import ChainSpec, build_hamiltonian, level_width, sample_random_model, scaling_ratio

# one random coupling matrix, drawn from [-1, 1) for every entry
model = sample_random_model(seed=0, lam=1.0)
spec = model.to_spec(L=8)
print("couplings c_ab:\n", np.round(model.c, 3))

# %%
# Level width, once from the matrix and once from the coefficients.
H = build_hamiltonian(spec)
print(f"level width (trace)       {level_width(H):.12f}")
print(f"level width (closed form) {level_width(spec):.12f}")

# %%
# Ratio of interaction strength to level width for each group size. The
# local field keeps every ratio a little under 1/sqrt(N).
for N, ratio in scaling_ratio(spec, [1, 2, 4]):
    print(f"N={N}: ratio {ratio:.4f}   1/sqrt(N) {1 / math.sqrt(N):.4f}")

# %%
# Without the local field the bound is met with equality.
bare = ChainSpec(2, 8, np.zeros(3), spec.C)
for N, ratio in scaling_ratio(bare, [1, 2, 4]):
    print(f"N={N}: ratio {ratio:.15f}")

# %%
# Averaged over many draws the level width sits near 5 (in units of the
# local splitting) at lambda = 1.
widths = [level_width(sample_random_model(s, 1.0).to_spec(8)) for s in range(100)]
print(f"mean level width over 100 draws: {np.mean(widths):.3f}")
