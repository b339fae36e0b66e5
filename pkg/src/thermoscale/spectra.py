"""Full eigendecomposition and the two energy scales of a partitioned chain.

``level_width`` is the RMS spread of the spectrum about its mean and
``interaction_strength`` the RMS size of the inter-group coupling. Both have
a trace form and a closed form in the coefficients; the two are kept as
independent code paths so each can check the other.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ChainSpec, PartitionSpec, build_hamiltonian, split_partition
from .operators import ChainOperator, GeneratorSet, hermitian_residual

HERMITIAN_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues and matching eigenvector columns."""

    energies: np.ndarray
    states: np.ndarray
    mean_energy: float

    @property
    def dim(self) -> int:
        return len(self.energies)

    def reconstruct(self) -> np.ndarray:
        return (self.states * self.energies) @ self.states.conj().T


def _matrix(H) -> np.ndarray:
    return np.asarray(getattr(H, "matrix", H))


def diagonalize(H) -> Spectrum:
    m = _matrix(H)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if hermitian_residual(m) > HERMITIAN_TOL:
        raise ValueError("matrix is not Hermitian")
    energies, states = np.linalg.eigh(m)
    order = np.argsort(energies, kind="stable")
    energies = energies[order]
    states = states[:, order]
    return Spectrum(energies, states, float(np.trace(m).real / m.shape[0]))


def level_width(H) -> float:
    """sqrt(Tr[(H - E_mean)^2] / dim) from an operator, or the closed form from a ChainSpec."""
    if isinstance(H, ChainSpec):
        return level_width_closed_form(H)
    m = _matrix(H)
    dim = m.shape[0]
    shifted = m - (np.trace(m) / dim) * np.eye(dim)
    # Tr(X^2) = sum |X_ij|^2 for Hermitian X
    return float(np.sqrt(np.sum(np.abs(shifted) ** 2) / dim))


def level_width_closed_form(spec: ChainSpec) -> float:
    n = spec.n
    total = np.sum(spec.C**2) + (2 / n) * np.sum(spec.A**2)
    return float((n / 2) * np.sqrt(spec.L * total))


def interaction_strength(I, part: PartitionSpec | None = None) -> float:
    """sqrt(Tr(I^2) / dim) for an interaction operator.

    ``interaction_strength(spec, part)`` evaluates the closed form
    (n/2) sqrt(n_G sum C^2) instead.
    """
    if isinstance(I, ChainSpec):
        if part is None:
            raise ValueError("closed form needs a partition")
        return interaction_strength_closed_form(I, part)
    m = _matrix(I)
    return float(np.sqrt(np.sum(np.abs(m) ** 2) / m.shape[0]))


def interaction_strength_closed_form(spec: ChainSpec, part: PartitionSpec) -> float:
    return float((spec.n / 2) * np.sqrt(part.n_G * np.sum(spec.C**2)))


def scaling_ratio(
    spec: ChainSpec,
    partitions,
    gens: GeneratorSet | None = None,
    closed_form: bool = False,
) -> list[tuple[int, float]]:
    """Ratio of interaction strength to level width for each group size N."""
    rows = []
    if closed_form:
        width = level_width_closed_form(spec)
    else:
        width = level_width(build_hamiltonian(spec, gens))
    for N in partitions:
        part = PartitionSpec.for_chain(spec.L, N)
        if closed_form:
            strength = interaction_strength_closed_form(spec, part)
        else:
            strength = interaction_strength(split_partition(spec, part, gens)[1])
        rows.append((int(N), strength / width if width > 0 else 0.0))
    return rows


def expectation_diagonal(op, basis: np.ndarray) -> np.ndarray:
    """<j|O|j> for every column |j> of ``basis``."""
    m = _matrix(op)
    return np.einsum("ij,ij->j", basis.conj(), m @ basis).real


def squared_expectation_diagonal(op, basis: np.ndarray) -> np.ndarray:
    """<j|O^2|j> = ||O|j>||^2 for Hermitian O."""
    m = _matrix(op)
    return np.sum(np.abs(m @ basis) ** 2, axis=0)


def overlap_weights(total: Spectrum, basis: np.ndarray) -> np.ndarray:
    """w[j, mu] = |<j|mu>|^2 for basis columns j and eigenvectors mu."""
    return np.abs(basis.conj().T @ total.states) ** 2


def conditional_second_moments(total: Spectrum, basis: np.ndarray, basis_energies: np.ndarray) -> np.ndarray:
    """sum_mu (E_mu - E_j)^2 |<j|mu>|^2 for every j."""
    w = overlap_weights(total, basis)
    gaps = total.energies[None, :] - np.asarray(basis_energies)[:, None]
    return np.sum(gaps**2 * w, axis=1)
