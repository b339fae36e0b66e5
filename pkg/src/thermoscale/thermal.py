"""Canonical states of the full chain and of its groups, and the diagnostics
comparing them: overlap distributions, the second-order expansion of the
diagonal elements, off-diagonal decay, distance and spectral temperature.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .chain import ChainSpec, PartitionSpec, group_hamiltonian
from .operators import GeneratorSet, kron_all, partial_trace
from .spectra import (
    Spectrum,
    diagonalize,
    expectation_diagonal,
    squared_expectation_diagonal,
)

TRACE_TOL = 1e-12
OCCUPATION_EPS = 1e-12
SMALLEST_PROBABILITY = 1e-300


class DegenerateOccupationError(ValueError):
    """Raised when the ground level holds (almost) all of the probability."""


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Unit-trace Hermitian operator.

    ``basis`` records which basis ``matrix`` is written in: ``"site"``,
    ``"eigen"`` (eigenbasis of H) or ``"product"``. Canonical states keep
    their inverse temperature, log partition function and spectrum.
    """

    matrix: np.ndarray
    basis: str = "site"
    beta: float | None = None
    log_partition: float | None = None
    spectrum: Spectrum | None = None

    def __post_init__(self):
        if self.basis not in ("site", "eigen", "product"):
            raise ValueError(f"unknown basis tag {self.basis!r}")
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got {m.shape}")
        if abs(np.trace(m) - 1) > 1e3 * TRACE_TOL:
            raise ValueError(f"trace {np.trace(m)} is not 1")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def canonical_populations(energies: np.ndarray, beta: float) -> tuple[np.ndarray, float]:
    """Boltzmann weights exp(-beta E)/Z and log Z, shifted by the lowest energy."""
    if not np.isfinite(beta) or beta < 0:
        raise ValueError(f"beta must be finite and >= 0, got {beta}")
    energies = np.asarray(energies, dtype=float)
    e0 = energies.min()
    boltz = np.exp(-beta * (energies - e0))
    s = boltz.sum()
    return boltz / s, float(np.log(s) - beta * e0)


def canonical_state(spectrum: Spectrum, beta: float, basis: str = "site") -> DensityMatrix:
    """exp(-beta H)/Z, diagonal in the eigenbasis of ``spectrum``."""
    p, log_z = canonical_populations(spectrum.energies, beta)
    if basis == "eigen":
        m = np.diag(p).astype(complex)
    elif basis == "site":
        v = spectrum.states
        m = (v * p) @ v.conj().T
    else:
        raise ValueError(f"canonical_state supports 'site' or 'eigen', not {basis!r}")
    return DensityMatrix(m, basis, float(beta), log_z, spectrum)


@dataclass(frozen=True, eq=False)
class ProductBasis:
    """Tensor products of group eigenstates, one group Hamiltonian per block.

    Column ``j`` of ``states`` is |j_1> (x) ... (x) |j_nG> in lexicographic
    order; ``energies[j]`` is the sum of the group energies.
    """

    partition: PartitionSpec
    n: int
    group_spectra: tuple[Spectrum, ...]
    states: np.ndarray
    energies: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.energies)

    @property
    def L(self) -> int:
        return self.partition.L


def build_product_basis(
    spec: ChainSpec, part: PartitionSpec, gens: GeneratorSet | None = None
) -> ProductBasis:
    if part.L != spec.L:
        raise ValueError(f"partition of {part.L} sites does not match chain of L={spec.L}")
    # translation invariance: every group has the same Hamiltonian
    group = diagonalize(group_hamiltonian(spec, part.N, gens))
    spectra = (group,) * part.n_G
    states = kron_all([group.states] * part.n_G)
    energies = np.zeros(1)
    for _ in range(part.n_G):
        energies = np.add.outer(energies, group.energies).reshape(-1)
    return ProductBasis(part, spec.n, spectra, states, energies)


def product_canonical(basis: ProductBasis, beta: float) -> DensityMatrix:
    """Tensor product of the group canonical states at a common beta, in the site basis."""
    factors, log_z = [], 0.0
    for g in basis.group_spectra:
        rho_g = canonical_state(g, beta)
        factors.append(rho_g.matrix)
        log_z += rho_g.log_partition
    return DensityMatrix(kron_all(factors), "site", float(beta), log_z)


def state_distance(a, b) -> float:
    """Hilbert-Schmidt distance sqrt(Tr[(a - b)^2])."""
    ma = np.asarray(getattr(a, "matrix", a))
    mb = np.asarray(getattr(b, "matrix", b))
    if ma.shape != mb.shape:
        raise ValueError(f"dimension mismatch {ma.shape} vs {mb.shape}")
    return float(np.linalg.norm(ma - mb))


@dataclass(frozen=True, eq=False)
class OverlapDistribution:
    """w_j(mu) = |<j|mu>|^2 over the eigenstates of the full Hamiltonian."""

    j_index: int
    energy: float
    energies: np.ndarray
    weights: np.ndarray
    conditional_second_moment: float
    spectral_second_moment: float

    @property
    def rescaled_x(self) -> np.ndarray:
        """(E_mu - E_j) / sqrt(<j|I^2|j>); all zero when the coupling vanishes."""
        width = np.sqrt(self.conditional_second_moment)
        if width == 0:
            return np.zeros_like(self.energies)
        return (self.energies - self.energy) / width


def overlap_weights(total: Spectrum, basis: ProductBasis) -> np.ndarray:
    if total.dim != basis.dim:
        raise ValueError(f"dimension mismatch {total.dim} vs {basis.dim}")
    return np.abs(basis.states.conj().T @ total.states) ** 2


def overlap_distributions(total: Spectrum, basis: ProductBasis, I) -> list[OverlapDistribution]:
    """Overlap distributions for every product state at once."""
    w = overlap_weights(total, basis)
    gaps = total.energies[None, :] - basis.energies[:, None]
    spectral = np.sum(gaps**2 * w, axis=1)
    direct = squared_expectation_diagonal(I, basis.states)
    return [
        OverlapDistribution(j, float(basis.energies[j]), total.energies, w[j], float(direct[j]), float(spectral[j]))
        for j in range(basis.dim)
    ]


def overlap_distribution(total: Spectrum, basis: ProductBasis, j: int, I) -> OverlapDistribution:
    if total.dim != basis.dim:
        raise ValueError(f"dimension mismatch {total.dim} vs {basis.dim}")
    amp = basis.states[:, j].conj() @ total.states
    w = np.abs(amp) ** 2
    e_j = float(basis.energies[j])
    spectral = float(np.sum((total.energies - e_j) ** 2 * w))
    direct = float(squared_expectation_diagonal(I, basis.states[:, [j]])[0])
    return OverlapDistribution(int(j), e_j, total.energies, w, direct, spectral)


class DensityOfStates:
    """Histogram estimate of the number of levels per unit energy.

    Bins have width ``bin_width`` and are anchored half a bin below the
    lowest level.
    """

    def __init__(self, energies, bin_width: float):
        if not bin_width > 0:
            raise ValueError(f"bin width must be positive, got {bin_width}")
        energies = np.asarray(energies, dtype=float)
        self.bin_width = float(bin_width)
        self.origin = float(energies.min() - bin_width / 2)
        idx = np.floor((energies - self.origin) / bin_width).astype(int)
        self.counts = np.bincount(idx)
        self.edges = self.origin + bin_width * np.arange(len(self.counts) + 1)

    def __call__(self, energy):
        e = np.asarray(energy, dtype=float)
        idx = np.floor((e - self.origin) / self.bin_width).astype(int)
        inside = (idx >= 0) & (idx < len(self.counts))
        out = np.zeros(e.shape)
        out[inside] = self.counts[idx[inside]] / self.bin_width
        return out if out.ndim else float(out)

    def total(self) -> float:
        return float(self.counts.sum())


def density_of_states(energies, bin_width: float | None = None) -> DensityOfStates:
    """Level density; the default bin is one twentieth of the level width."""
    if bin_width is None:
        e = np.asarray(energies, dtype=float)
        bin_width = float(np.sqrt(np.mean((e - e.mean()) ** 2))) / 20
    return DensityOfStates(energies, bin_width)


@dataclass(frozen=True, eq=False)
class DecayProfile:
    j_index: np.ndarray
    x: np.ndarray
    weighted_density: np.ndarray
    envelope: np.ndarray
    tail_points: int
    above_envelope: int
    max_fraction: float

    @property
    def fraction_above(self) -> float:
        return self.above_envelope / self.tail_points if self.tail_points else 0.0

    @property
    def passed(self) -> bool:
        return self.fraction_above < self.max_fraction


def decay_profile(
    dists,
    eta: DensityOfStates,
    beta: float | None = None,
    amplitude: float = 0.25,
    beta_width: float = 0.5,
    max_fraction: float = 0.05,
) -> DecayProfile:
    """Scatter of w_j(mu) eta(E_mu) against the rescaled gap x, with the envelope.

    The envelope is amplitude * exp(-beta |E_mu - E_j|). With ``beta=None``
    each j gets beta_j = beta_width / sqrt(<j|I^2|j>), so the envelope reads
    amplitude * exp(-beta_width |x|). Points with |x| > 1 form the tail; the
    profile passes when fewer than ``max_fraction`` of them exceed the
    envelope.
    """
    if isinstance(dists, OverlapDistribution):
        dists = [dists]
    js, xs, ys, envs = [], [], [], []
    for d in dists:
        x = d.rescaled_x
        y = d.weights * eta(d.energies)
        if beta is None:
            env = amplitude * np.exp(-beta_width * np.abs(x))
        else:
            env = amplitude * np.exp(-beta * np.abs(d.energies - d.energy))
        js.append(np.full(len(x), d.j_index))
        xs.append(x)
        ys.append(y)
        envs.append(env)
    j = np.concatenate(js)
    x = np.concatenate(xs)
    y = np.concatenate(ys)
    env = np.concatenate(envs)
    tail = np.abs(x) > 1
    above = int(np.count_nonzero(tail & (y > env)))
    return DecayProfile(j, x, y, env, int(np.count_nonzero(tail)), above, max_fraction)


class DiagonalComparison(NamedTuple):
    """Per product state: exact <j|rho|j>, zeroth and second-order estimates."""

    exact: np.ndarray
    zeroth: np.ndarray
    truncated: np.ndarray
    correction_norm: np.ndarray
    first_moment_residual: np.ndarray | None


def diagonal_comparison(rho: DensityMatrix, basis: ProductBasis, I, beta: float | None = None) -> DiagonalComparison:
    """Compare <j|rho|j> to exp(-beta E_j)/Z (1 - beta <I>_j + beta^2/2 <I^2>_j).

    ``rho`` must be a canonical state of the full Hamiltonian (it carries Z).
    When it also carries its spectrum, the first-moment identity
    sum_mu E_mu w_j(mu) = E_j + <j|I|j> is checked and its relative residual
    returned.
    """
    if rho.log_partition is None:
        raise ValueError("diagonal_comparison needs a canonical state")
    beta = rho.beta if beta is None else beta
    if rho.basis != "site":
        raise ValueError("rho must be given in the site basis")
    b = basis.states
    exact = expectation_diagonal(rho.matrix, b)
    mean_i = expectation_diagonal(I, b)
    mean_i2 = squared_expectation_diagonal(I, b)
    zeroth = np.exp(-beta * basis.energies - rho.log_partition)
    truncated = zeroth * (1 - beta * mean_i + 0.5 * beta**2 * mean_i2)
    residual = None
    if rho.spectrum is not None:
        w = overlap_weights(rho.spectrum, basis)
        first = w @ rho.spectrum.energies
        expected = basis.energies + mean_i
        scale = np.maximum(np.abs(expected), np.sqrt(mean_i2))
        scale = np.where(scale > 0, scale, 1.0)
        residual = np.abs(first - expected) / scale
    return DiagonalComparison(exact, zeroth, truncated, beta * np.sqrt(mean_i2), residual)


@dataclass(frozen=True, eq=False)
class OffDiagonalProfile:
    gaps: np.ndarray
    magnitudes: np.ndarray
    threshold: float
    max_beyond: float
    typical_diagonal: float

    @property
    def ratio(self) -> float:
        return self.max_beyond / self.typical_diagonal if self.typical_diagonal else 0.0


def offdiagonal_profile(rho: DensityMatrix, basis: ProductBasis, interaction_strength: float) -> OffDiagonalProfile:
    """|<j|rho|j'>| against |E_j - E_j'| for all j < j'.

    Summarized by the largest magnitude where the gap exceeds twice the
    interaction strength, relative to the median diagonal element.
    """
    b = basis.states
    r = b.conj().T @ rho.matrix @ b
    iu = np.triu_indices(basis.dim, k=1)
    gaps = np.abs(basis.energies[iu[0]] - basis.energies[iu[1]])
    mags = np.abs(r[iu])
    threshold = 2 * interaction_strength
    beyond = mags[gaps > threshold]
    max_beyond = float(beyond.max()) if beyond.size else 0.0
    typical = float(np.median(np.abs(np.diag(r))))
    return OffDiagonalProfile(gaps, mags, threshold, max_beyond, typical)


class GroupOccupation(NamedTuple):
    levels: np.ndarray
    probabilities: np.ndarray
    degeneracies: np.ndarray


def cluster_levels(energies, tol: float) -> list[np.ndarray]:
    """Group ascending energies into levels; a gap larger than ``tol`` starts a new level."""
    order = np.argsort(energies, kind="stable")
    e = np.asarray(energies)[order]
    breaks = np.flatnonzero(np.diff(e) > tol) + 1
    return np.split(order, breaks)


def group_occupations(rho: DensityMatrix, basis: ProductBasis, group: int = 1, tol: float | None = None) -> GroupOccupation:
    """Level occupations of one group: the reduced state projected on the group eigenbasis.

    Degenerate group eigenvalues (within ``tol``, default 1e-9 times the
    group level width) are merged into one level with summed probability.
    """
    if rho.basis != "site":
        raise ValueError("rho must be given in the site basis")
    part = basis.partition
    spec_g = basis.group_spectra[group - 1]
    reduced = partial_trace(rho.matrix, part.group_sites(group), n=basis.n, L=basis.L)
    diag = expectation_diagonal(reduced, spec_g.states)
    if tol is None:
        e = spec_g.energies
        width = float(np.sqrt(np.mean((e - e.mean()) ** 2)))
        tol = 1e-9 * (width if width > 0 else 1.0)
    clusters = cluster_levels(spec_g.energies, tol)
    levels = np.array([spec_g.energies[c].mean() for c in clusters])
    probs = np.array([diag[c].sum() for c in clusters])
    degs = np.array([len(c) for c in clusters])
    return GroupOccupation(levels, probs, degs)


def spectral_temperature(levels, probabilities, degeneracies=None) -> float:
    """Occupation-weighted mean of the inverse temperatures that each excited
    level defines together with the ground level.

    For degenerate levels the Boltzmann factor is taken between occupations
    per state, p_i / g_i, so canonical populations return beta exactly.
    """
    e = np.asarray(levels, dtype=float)
    p = np.asarray(probabilities, dtype=float)
    g = np.ones_like(e) if degeneracies is None else np.asarray(degeneracies, dtype=float)
    if not (e.shape == p.shape == g.shape):
        raise ValueError("levels, probabilities and degeneracies must have equal length")
    order = np.argsort(e, kind="stable")
    e, p, g = e[order], p[order], g[order]
    if len(e) < 2 or np.any(np.diff(e) <= 0):
        raise ValueError("need at least two distinct levels")
    p0 = p[0]
    if p0 >= 1 - OCCUPATION_EPS:
        raise DegenerateOccupationError("ground level carries all the probability")
    if p0 <= 0:
        raise ValueError("ground level is unoccupied")
    excited = p[1:] >= SMALLEST_PROBABILITY
    pe, ge, ee = p[1:][excited], g[1:][excited], e[1:][excited]
    log_ratio = np.log(pe / ge) - np.log(p0 / g[0])
    return float(-np.sum(pe / (1 - p0) * log_ratio / (ee - e[0])))


def group_spectral_temperature(rho: DensityMatrix, basis: ProductBasis, group: int = 1) -> float:
    occ = group_occupations(rho, basis, group)
    return spectral_temperature(*occ)
