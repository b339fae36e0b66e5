"""
How far product states spread in energy
=======================================

Each product |j> of group eigenstates spreads over the global eigenstates
with weights w_j(mu). Its energy variance equals <j|I^2|j>, and weighted by
the density of states the spread decays faster than 0.25 exp(-0.5 |x|).
"""

# %%
import numpy as np

from thermoscale import (
    PartitionSpec,
    build_hamiltonian,
    build_product_basis,
    decay_profile,
    density_of_states,
    diagonalize,
    sample_random_model,
    split_partition,
)
from thermoscale.thermal import overlap_distributions

spec = sample_random_model(0, 1.0).to_spec(8)
total = diagonalize(build_hamiltonian(spec))
eta = density_of_states(total.energies)

# %%
for N in (1, 2, 4):
    part = PartitionSpec.for_chain(8, N)
    _, I = split_partition(spec, part)
    basis = build_product_basis(spec, part)
    dists = overlap_distributions(total, basis, I)
    residual = max(
        abs(d.spectral_second_moment - d.conditional_second_moment) / d.conditional_second_moment
        for d in dists
    )
    profile = decay_profile(dists, eta)
    print(f"N={N}: variance identity residual {residual:.1e}, "
          f"{profile.fraction_above:.1%} of |x|>1 points above the envelope")

# %%
# Plot the last partition if matplotlib is around.
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots()
    ax.plot(profile.x, profile.weighted_density, ",", alpha=0.3)
    xs = np.linspace(-4, 4, 400)
    ax.plot(xs, 0.25 * np.exp(-0.5 * np.abs(xs)), "k-")
    ax.set_xlim(-4, 4)
    ax.set_xlabel("x")
    ax.set_ylabel("w eta")
    fig.savefig("overlap_decay.png", dpi=120)
