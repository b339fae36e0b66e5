"""
Spectral temperature of a group
===============================

Read the level occupations of one group off the global canonical state and
turn them into an inverse temperature.
"""

# %%
from thermoscale import (
    PartitionSpec,
    build_hamiltonian,
    build_product_basis,
    canonical_state,
    diagonalize,
    group_occupations,
    sample_random_model,
    spectral_temperature,
)

spec = sample_random_model(1, 1.0).to_spec(8)
total = diagonalize(build_hamiltonian(spec))

# %%
for N in (1, 2, 4):
    basis = build_product_basis(spec, PartitionSpec.for_chain(8, N))
    for beta in (0.1, 0.4):
        occ = group_occupations(canonical_state(total, beta), basis)
        print(f"N={N} beta={beta}: beta_spec/beta = {spectral_temperature(*occ) / beta:.4f}")

# %%
# Not every coupling draw makes the groups hotter than the whole: with a
# strongly aligning zz coupling a single spin is more polarized than an
# isolated one, and its spectral temperature comes out colder.
spec = sample_random_model(5, 1.0).to_spec(8)
total = diagonalize(build_hamiltonian(spec))
basis = build_product_basis(spec, PartitionSpec.for_chain(8, 1))
occ = group_occupations(canonical_state(total, 0.4), basis)
print(f"seed 5, N=1: beta_spec/beta = {spectral_temperature(*occ) / 0.4:.4f}")
