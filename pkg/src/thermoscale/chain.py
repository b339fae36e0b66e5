"""Translation-invariant chain Hamiltonians with periodic boundaries.

The Hamiltonian is

    H = sum_j [ (n/2) sum_a A_a s_a(j) + (n^2/4) sum_ab C_ab s_a(j) s_b(j+1) ]

with site L + 1 identified with site 1. Splitting the chain into n_G
contiguous groups of N sites gives H = H0 + I, where I collects the n_G
bonds (iN, iN + 1) that cross group boundaries.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .operators import (
    ChainOperator,
    GeneratorSet,
    build_generators,
    embed_local,
    successor,
)


@dataclass(frozen=True, eq=False)
class ChainSpec:
    """Coefficients of one chain Hamiltonian (energies in units of the level splitting)."""

    n: int
    L: int
    A: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        m = self.n**2 - 1
        A = np.asarray(self.A, dtype=float).reshape(-1)
        C = np.asarray(self.C, dtype=float)
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.L < 2:
            raise ValueError(f"L must be >= 2, got {self.L}")
        if A.shape != (m,) or C.shape != (m, m):
            raise ValueError(f"expected A of length {m} and C of shape {(m, m)}")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(C))):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "C", C)

    @property
    def dim(self) -> int:
        return self.n**self.L

    def with_L(self, L: int) -> "ChainSpec":
        return ChainSpec(self.n, L, self.A, self.C)


@dataclass(frozen=True, eq=False)
class NumericModel:
    """Spin-1/2 chain: (dE/2) sum s_z(j) + lam sum c_ab s_a(j) s_b(j+1)."""

    delta_e: float
    lam: float
    c: np.ndarray
    seed: int | None = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return int(round(np.sqrt(self.c.shape[0] + 1)))

    def to_spec(self, L: int) -> ChainSpec:
        n = self.n
        A = np.zeros(n**2 - 1)
        # last generator is the highest diagonal one; sigma_z for n = 2
        A[-1] = self.delta_e / 2
        return ChainSpec(n, L, A, self.lam * np.asarray(self.c, dtype=float))


@dataclass(frozen=True)
class PartitionSpec:
    """n_G contiguous groups of N sites each."""

    N: int
    n_G: int

    def __post_init__(self):
        if self.N < 1 or self.n_G < 1:
            raise ValueError(f"invalid partition N={self.N}, n_G={self.n_G}")

    @classmethod
    def for_chain(cls, L: int, N: int) -> "PartitionSpec":
        if N < 1 or L % N:
            raise ValueError(f"group size N={N} does not divide L={L}")
        return cls(N, L // N)

    @property
    def L(self) -> int:
        return self.N * self.n_G

    def group_sites(self, g: int) -> list[int]:
        """Sites of group ``g`` (1-based)."""
        if not 1 <= g <= self.n_G:
            raise ValueError(f"group {g} out of range 1..{self.n_G}")
        return list(range((g - 1) * self.N + 1, g * self.N + 1))

    def boundary_bonds(self) -> list[tuple[int, int]]:
        return [(i * self.N, successor(i * self.N, self.L)) for i in range(1, self.n_G + 1)]


def _gens_for(spec: ChainSpec, gens: GeneratorSet | None) -> GeneratorSet:
    if gens is None:
        return build_generators(spec.n)
    if gens.n != spec.n:
        raise ValueError(f"generator set for n={gens.n} does not match chain n={spec.n}")
    return gens


def local_term(spec: ChainSpec, gens: GeneratorSet | None = None) -> np.ndarray:
    """Single-site operator (n/2) sum_a A_a s_a."""
    gens = _gens_for(spec, gens)
    return (spec.n / 2) * np.einsum("a,aij->ij", spec.A, gens.stack())


def bond_term(spec: ChainSpec, gens: GeneratorSet | None = None) -> np.ndarray:
    """Two-site operator (n^2/4) sum_ab C_ab s_a (x) s_b."""
    gens = _gens_for(spec, gens)
    s = gens.stack()
    n = spec.n
    pair = np.einsum("ab,aij,bkl->ikjl", spec.C, s, s).reshape(n * n, n * n)
    return (n * n / 4) * pair


def _assemble(spec, gens, sites, bonds) -> ChainOperator:
    n, L = spec.n, spec.L
    h = np.zeros((n**L, n**L), dtype=complex)
    loc = local_term(spec, gens)
    bond = bond_term(spec, gens)
    for j in sites:
        h += embed_local(loc, [j], n, L)
    for j, k in bonds:
        h += embed_local(bond, [j, k], n, L)
    return ChainOperator(h, n, L)


def chain_bonds(L: int) -> list[tuple[int, int]]:
    """Periodic bond list {(j, j mod L + 1)}; for L = 2 the pair appears twice."""
    return [(j, successor(j, L)) for j in range(1, L + 1)]


def build_hamiltonian(spec: ChainSpec, gens: GeneratorSet | None = None) -> ChainOperator:
    gens = _gens_for(spec, gens)
    return _assemble(spec, gens, range(1, spec.L + 1), chain_bonds(spec.L))


def group_hamiltonian(spec: ChainSpec, N: int, gens: GeneratorSet | None = None) -> ChainOperator:
    """Open N-site chain with the same local terms and couplings: one group of a partition."""
    gens = _gens_for(spec, gens)
    if N == 1:
        return ChainOperator(local_term(spec, gens).astype(complex), spec.n, 1)
    return _assemble(spec.with_L(N), gens, range(1, N + 1), [(j, j + 1) for j in range(1, N)])


def split_partition(
    spec: ChainSpec, part: PartitionSpec, gens: GeneratorSet | None = None
) -> tuple[ChainOperator, ChainOperator]:
    """Return (H0, I): decoupled groups plus the inter-group boundary bonds."""
    if part.L != spec.L:
        raise ValueError(f"partition of {part.L} sites does not match chain of L={spec.L}")
    gens = _gens_for(spec, gens)
    boundary = part.boundary_bonds()
    inner = [b for b in chain_bonds(spec.L) if b not in boundary]
    h0 = _assemble(spec, gens, range(1, spec.L + 1), inner)
    interaction = _assemble(spec, gens, [], boundary)
    return h0, interaction


def extract_coefficients(
    H: ChainOperator, gens: GeneratorSet | None = None, site: int = 1
) -> tuple[np.ndarray, np.ndarray]:
    """Project H back onto (A, C) using the generators at ``site`` and ``site + 1``.

    A_a = Tr(H s_a(i)) / dim and C_ab = Tr(H s_a(i) s_b(i+1)) / dim.
    For L = 2 the doubled bond makes C come back as C + C^T.
    """
    gens = build_generators(H.n) if gens is None else gens
    n, L = H.n, H.L
    nxt = successor(site, L)
    singles = [embed_local(s, [site], n, L) for s in gens]
    neighbours = [embed_local(s, [nxt], n, L) for s in gens]
    # Tr(H P) = sum(H * P^T)
    A = np.array([np.sum(H.matrix * p.T).real for p in singles]) / H.dim
    C = np.array(
        [[np.sum(H.matrix * (p @ q).T).real for q in neighbours] for p in singles]
    ) / H.dim
    return A, C


def sample_random_model(seed: int, lam: float, delta_e: float = 1.0, n: int = 2) -> NumericModel:
    """Draw every coupling c_ab independently and uniformly from [-1, 1)."""
    rng = np.random.default_rng(np.random.SeedSequence(int(seed)))
    m = n * n - 1
    c = rng.uniform(-1.0, 1.0, size=(m, m))
    return NumericModel(float(delta_e), float(lam), c, seed=int(seed))
