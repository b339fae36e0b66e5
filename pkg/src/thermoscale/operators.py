"""Dense operator primitives for chains of n-level subsystems.

Sites are numbered 1..L. Generator indices are 0-based positions in a
:class:`GeneratorSet`; for ``n = 2`` the names ``"x"``, ``"y"``, ``"z"`` are
accepted as aliases.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Sequence

import numpy as np

HERMITIAN_RTOL = 1e-12

_PAULI_NAMES = {"x": 0, "y": 1, "z": 2}


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    """The n**2 - 1 traceless Hermitian generators with Tr[s_a s_b] = 2 delta_ab.

    Ordering is symmetric off-diagonal family, antisymmetric family, then the
    diagonal family. For n = 2 this gives (sigma_x, sigma_y, sigma_z).
    """

    n: int
    matrices: tuple[np.ndarray, ...]

    def __len__(self) -> int:
        return len(self.matrices)

    def __getitem__(self, alpha) -> np.ndarray:
        return self.matrices[self.index(alpha)]

    def __iter__(self):
        return iter(self.matrices)

    def index(self, alpha) -> int:
        if isinstance(alpha, str):
            if self.n != 2 or alpha.lower() not in _PAULI_NAMES:
                raise ValueError(f"unknown generator name {alpha!r} for n={self.n}")
            return _PAULI_NAMES[alpha.lower()]
        alpha = int(alpha)
        if not 0 <= alpha < len(self.matrices):
            raise ValueError(f"generator index {alpha} out of range 0..{len(self.matrices) - 1}")
        return alpha

    def stack(self) -> np.ndarray:
        """All generators as one ``(n**2 - 1, n, n)`` array."""
        return np.stack(self.matrices)


@dataclass(frozen=True, eq=False)
class ChainOperator:
    """Dense operator on the full ``n**L`` dimensional chain space."""

    matrix: np.ndarray
    n: int
    L: int

    def __post_init__(self):
        dim = self.n**self.L
        if self.matrix.shape != (dim, dim):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match n**L = {dim}"
            )

    @property
    def dim(self) -> int:
        return self.n**self.L

    def is_hermitian(self, rtol: float = HERMITIAN_RTOL) -> bool:
        return hermitian_residual(self.matrix) <= rtol

    def __add__(self, other: "ChainOperator") -> "ChainOperator":
        if (other.n, other.L) != (self.n, self.L):
            raise ValueError("operators live on different chains")
        return ChainOperator(self.matrix + other.matrix, self.n, self.L)

    def __sub__(self, other: "ChainOperator") -> "ChainOperator":
        if (other.n, other.L) != (self.n, self.L):
            raise ValueError("operators live on different chains")
        return ChainOperator(self.matrix - other.matrix, self.n, self.L)


def hermitian_residual(matrix: np.ndarray) -> float:
    """||M - M^H||_F / max(||M||_F, 1)."""
    scale = max(np.linalg.norm(matrix), 1.0)
    return float(np.linalg.norm(matrix - matrix.conj().T) / scale)


@lru_cache(maxsize=None)
def _gell_mann(n: int) -> tuple[np.ndarray, ...]:
    symmetric, antisymmetric, diagonal = [], [], []
    for j in range(n):
        for k in range(j + 1, n):
            s = np.zeros((n, n), dtype=complex)
            s[j, k] = s[k, j] = 1.0
            symmetric.append(s)
            a = np.zeros((n, n), dtype=complex)
            a[j, k] = -1j
            a[k, j] = 1j
            antisymmetric.append(a)
    for l in range(1, n):
        d = np.zeros((n, n), dtype=complex)
        d[np.arange(l), np.arange(l)] = 1.0
        d[l, l] = -l
        diagonal.append(np.sqrt(2.0 / (l * (l + 1))) * d)
    mats = symmetric + antisymmetric + diagonal
    for m in mats:
        m.setflags(write=False)
    return tuple(mats)


def build_generators(n: int) -> GeneratorSet:
    """Generalized Gell-Mann matrices for SU(n), normalized to Tr[s_a s_b] = 2 delta_ab."""
    if int(n) != n or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    return GeneratorSet(int(n), _gell_mann(int(n)))


def _check_site(site: int, L: int) -> None:
    if not 1 <= site <= L:
        raise ValueError(f"site {site} out of range 1..{L}")


def embed_local(op: np.ndarray, sites: Sequence[int], n: int, L: int) -> np.ndarray:
    """Embed an operator acting on ``sites`` (in the order given) into the chain.

    ``op`` has dimension ``n**len(sites)`` with the first listed site as the
    most significant tensor factor.
    """
    sites = [int(s) for s in sites]
    for s in sites:
        _check_site(s, L)
    k = len(sites)
    if len(set(sites)) != k:
        raise ValueError(f"repeated site in {sites}")
    if op.shape != (n**k, n**k):
        raise ValueError(f"operator shape {op.shape} does not fit {k} sites of dimension {n}")

    if sites == list(range(sites[0], sites[0] + k)):
        # contiguous block: a plain Kronecker product with identities
        left = n ** (sites[0] - 1)
        right = n ** (L - sites[0] - k + 1)
        return np.kron(np.kron(np.eye(left, dtype=complex), op), np.eye(right, dtype=complex))

    # general case: op (x) 1 lives on axes [sites..., others...]; permute back
    full = np.kron(op, np.eye(n ** (L - k), dtype=complex))
    others = [s for s in range(1, L + 1) if s not in sites]
    order = sites + others
    perm = np.argsort([s - 1 for s in order])
    t = full.reshape((n,) * (2 * L))
    t = t.transpose(list(perm) + [L + p for p in perm])
    return np.ascontiguousarray(t.reshape(n**L, n**L))


def embed_single(gens: GeneratorSet, alpha, site: int, L: int) -> ChainOperator:
    """Generator ``alpha`` acting on ``site`` of an ``L``-site chain."""
    _check_site(site, L)
    return ChainOperator(embed_local(gens[alpha], [site], gens.n, L), gens.n, L)


def successor(site: int, L: int) -> int:
    """Periodic right neighbour of ``site``."""
    return site % L + 1


def embed_pair(gens: GeneratorSet, alpha, beta, site: int, L: int) -> ChainOperator:
    """Product s_alpha(site) s_beta(site + 1) with periodic wraparound."""
    _check_site(site, L)
    nxt = successor(site, L)
    n = gens.n
    if nxt == site:
        raise ValueError("a pair operator needs at least two sites")
    m = embed_local(gens[alpha], [site], n, L) @ embed_local(gens[beta], [nxt], n, L)
    return ChainOperator(m, n, L)


def _contiguous(keep: Sequence[int]) -> bool:
    return all(b == a + 1 for a, b in zip(keep, keep[1:]))


def partial_trace(op, keep: Sequence[int], n: int | None = None, L: int | None = None) -> np.ndarray:
    """Reduced matrix on the contiguous block ``keep`` (1-based site indices).

    ``op`` may be a :class:`ChainOperator`, anything with a ``matrix``
    attribute, or a bare array (then ``n`` and ``L`` are required).
    """
    if isinstance(op, ChainOperator):
        n, L, matrix = op.n, op.L, op.matrix
    else:
        matrix = getattr(op, "matrix", op)
        if n is None:
            n = getattr(op, "n", None)
        if L is None:
            L = getattr(op, "L", None)
        if n is None or L is None:
            raise ValueError("n and L are required for a bare matrix")
    matrix = np.asarray(matrix)
    keep = sorted(int(k) for k in keep)
    if not keep:
        raise ValueError("keep must be nonempty")
    for s in keep:
        _check_site(s, L)
    if len(set(keep)) != len(keep):
        raise ValueError(f"repeated site in {keep}")
    if not _contiguous(keep):
        raise NotImplementedError(f"partial trace over non-contiguous sites {keep}")
    if matrix.shape != (n**L, n**L):
        raise ValueError(f"matrix shape {matrix.shape} does not match n**L = {n**L}")

    left = n ** (keep[0] - 1)
    mid = n ** len(keep)
    right = n ** (L - keep[-1])
    t = matrix.reshape(left, mid, right, left, mid, right)
    return np.einsum("aibajb->ij", t)


def kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, mats)
