import itertools
import math

import numpy as np
import pytest

from thermoscale.chain import ChainSpec, PartitionSpec, build_hamiltonian, sample_random_model, split_partition
from thermoscale.spectra import (
    conditional_second_moments,
    diagonalize,
    interaction_strength,
    level_width,
    scaling_ratio,
    squared_expectation_diagonal,
)
from thermoscale.thermal import build_product_basis


def test_diagonalize_two_by_two():
    s = diagonalize(np.diag([1.0, -1.0]))
    np.testing.assert_array_equal(s.energies, [-1, 1])
    np.testing.assert_allclose(np.abs(s.states), [[0, 1], [1, 0]])
    assert s.mean_energy == 0


def test_diagonalize_rejects_non_hermitian():
    with pytest.raises(ValueError):
        diagonalize(np.array([[0, 1], [0, 0]], dtype=float))


def test_decoupled_three_spin_spectrum():
    spec = sample_random_model(0, 0.0).to_spec(3)
    s = diagonalize(build_hamiltonian(spec))
    expected = sorted(0.5 * sum(signs) for signs in itertools.product((-1, 1), repeat=3))
    np.testing.assert_allclose(s.energies, expected, atol=1e-14)


@pytest.mark.parametrize("seed", range(5))
def test_reconstruction_and_unitarity(seed):
    H = build_hamiltonian(sample_random_model(seed, 1.0).to_spec(8))
    s = diagonalize(H)
    assert np.all(np.diff(s.energies) >= 0)
    assert np.linalg.norm(s.reconstruct() - H.matrix) / np.linalg.norm(H.matrix) < 1e-10
    np.testing.assert_allclose(s.states.conj().T @ s.states, np.eye(256), atol=1e-10)
    residual = np.linalg.norm(H.matrix @ s.states - s.states * s.energies)
    assert residual < 1e-9 * np.linalg.norm(H.matrix)


def test_level_width_noninteracting():
    spec = sample_random_model(0, 0.0).to_spec(8)
    assert level_width(build_hamiltonian(spec)) == pytest.approx(math.sqrt(8) / 2, rel=1e-12)
    assert level_width(spec) == pytest.approx(math.sqrt(8) / 2, rel=1e-12)


@pytest.mark.parametrize("n,L", [(2, 8), (2, 5), (3, 4)])
def test_level_width_dual_path(n, L):
    rng = np.random.default_rng(L)
    m = n * n - 1
    spec = ChainSpec(n, L, rng.uniform(-1, 1, m), rng.uniform(-1, 1, (m, m)))
    assert level_width(build_hamiltonian(spec)) == pytest.approx(level_width(spec), rel=1e-10)


def test_mean_level_width_close_to_five_lambda():
    widths = [level_width(sample_random_model(s, 1.0).to_spec(8)) for s in range(100)]
    assert 4.7 <= np.mean(widths) <= 5.5
    # E[sum c^2] = 3 gives sqrt(8 * 3.25) for the root-mean-square width
    assert math.sqrt(np.mean(np.square(widths))) == pytest.approx(math.sqrt(26), rel=0.05)


def test_interaction_strength_zero_without_coupling():
    spec = sample_random_model(0, 0.0).to_spec(8)
    _, I = split_partition(spec, PartitionSpec.for_chain(8, 4))
    assert interaction_strength(I) == 0


def test_interaction_strength_single_zz_coupling():
    lam = 0.8
    c = np.zeros((3, 3))
    c[2, 2] = 1
    spec = ChainSpec(2, 8, [0, 0, 0.5], lam * c)
    part = PartitionSpec.for_chain(8, 4)
    _, I = split_partition(spec, part)
    assert interaction_strength(I) == pytest.approx(lam * math.sqrt(2), rel=1e-12)
    assert interaction_strength(spec, part) == pytest.approx(lam * math.sqrt(2), rel=1e-12)


@pytest.mark.parametrize("seed", range(3))
@pytest.mark.parametrize("N", [1, 2, 4])
def test_interaction_strength_dual_path(seed, N):
    spec = sample_random_model(seed, 1.0).to_spec(8)
    part = PartitionSpec.for_chain(8, N)
    _, I = split_partition(spec, part)
    assert interaction_strength(I) == pytest.approx(interaction_strength(spec, part), rel=1e-10)


def test_scaling_equality_without_local_terms():
    rng = np.random.default_rng(2)
    spec = ChainSpec(2, 8, np.zeros(3), rng.uniform(-1, 1, (3, 3)))
    for N, ratio in scaling_ratio(spec, [1, 2, 4]):
        assert abs(ratio - 1 / math.sqrt(N)) < 1e-12


@pytest.mark.parametrize("seed", range(5))
def test_scaling_bound_with_local_terms(seed):
    spec = sample_random_model(seed, 1.0).to_spec(8)
    for closed in (False, True):
        for N, ratio in scaling_ratio(spec, [1, 2, 4], closed_form=closed):
            assert ratio < 1 / math.sqrt(N)
            assert ratio > 0.8 / math.sqrt(N)


def test_scaling_ratio_approaches_bound_from_below():
    c = sample_random_model(4, 1.0).c
    previous = {N: 0.0 for N in (1, 2, 4)}
    for lam in (0.1, 1.0, 10.0, 100.0):
        spec = ChainSpec(2, 8, [0, 0, 0.5], lam * c)
        for N, ratio in scaling_ratio(spec, [1, 2, 4], closed_form=True):
            assert previous[N] < ratio < 1 / math.sqrt(N)
            previous[N] = ratio
    assert previous[4] == pytest.approx(0.5, rel=1e-4)


@pytest.mark.parametrize("N", [1, 2, 4])
def test_second_moment_identity(chain8, N):
    spec, _, total = chain8
    part = PartitionSpec.for_chain(8, N)
    _, I = split_partition(spec, part)
    basis = build_product_basis(spec, part)
    lhs = conditional_second_moments(total, basis.states, basis.energies)
    rhs = squared_expectation_diagonal(I, basis.states)
    assert np.max(np.abs(lhs - rhs) / rhs) < 1e-9
    assert np.mean(rhs) == pytest.approx(interaction_strength(I) ** 2, rel=1e-10)
