import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_density
from thermoscale.operators import (
    ChainOperator,
    build_generators,
    embed_local,
    embed_pair,
    embed_single,
    partial_trace,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)


def test_pauli_set_in_order(pauli):
    assert len(pauli) == 3
    for got, want in zip(pauli, (X, Y, Z)):
        np.testing.assert_array_equal(got, want)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_generators_traceless_hermitian_orthogonal(n):
    gens = build_generators(n)
    assert len(gens) == n * n - 1
    for s in gens:
        assert abs(np.trace(s)) < 1e-14
        np.testing.assert_allclose(s, s.conj().T, atol=0)
    for (a, sa), (b, sb) in itertools.product(enumerate(gens), repeat=2):
        assert np.trace(sa @ sb) == pytest.approx(2.0 * (a == b), abs=1e-14)


@pytest.mark.parametrize("n", [1, 0, -3])
def test_generators_reject_small_n(n):
    with pytest.raises(ValueError):
        build_generators(n)


def test_named_generators_only_for_qubits():
    with pytest.raises(ValueError):
        build_generators(3)["z"]
    with pytest.raises(ValueError):
        build_generators(2)[3]


def test_embed_single_first_site(pauli):
    op = embed_single(pauli, "z", 1, 2)
    np.testing.assert_array_equal(op.matrix, np.kron(Z, np.eye(2)))
    assert sorted(np.linalg.eigvalsh(op.matrix)) == [-1, -1, 1, 1]


def test_embed_single_rejects_bad_site(pauli):
    for site in (0, 3):
        with pytest.raises(ValueError):
            embed_single(pauli, "z", site, 2)


@pytest.mark.parametrize("n,L", [(2, 2), (2, 3), (3, 2)])
def test_full_space_trace_relation(n, L):
    gens = build_generators(n)
    dim = n**L
    ops = {(a, i): embed_single(gens, a, i, L).matrix for a in range(len(gens)) for i in range(1, L + 1)}
    for (ka, A), (kb, B) in itertools.product(ops.items(), repeat=2):
        expected = 2 * dim / n * (ka == kb)
        assert abs(np.trace(A @ B) - expected) <= 1e-10 * dim
    for A in ops.values():
        assert abs(np.trace(A)) < 1e-12


def test_trace_z1_z1_and_z1_x2(pauli):
    z1 = embed_single(pauli, "z", 1, 2).matrix
    x2 = embed_single(pauli, "x", 2, 2).matrix
    assert np.trace(z1 @ z1).real == pytest.approx(4.0)
    assert np.trace(z1 @ x2) == 0


def test_embed_pair_and_wraparound(pauli):
    zz = np.kron(Z, Z)
    np.testing.assert_array_equal(embed_pair(pauli, "z", "z", 1, 2).matrix, zz)
    np.testing.assert_array_equal(embed_pair(pauli, "z", "z", 2, 2).matrix, zz)
    assert sorted(np.diag(zz).real) == [-1, -1, 1, 1]


def test_embed_pair_wraps_last_site(pauli):
    # s_x(3) s_y(1) on three sites
    op = embed_pair(pauli, "x", "y", 3, 3).matrix
    np.testing.assert_allclose(op, np.kron(np.kron(Y, np.eye(2)), X))


def test_embed_pair_square_trace(pauli):
    op = embed_pair(pauli, "z", "z", 1, 3).matrix
    assert np.trace(op @ op).real / 8 == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("site", [1, 2, 3, 4])
def test_embed_outputs_hermitian(pauli, site):
    for a, b in itertools.product(range(3), repeat=2):
        op = embed_pair(pauli, a, b, site, 4)
        assert op.is_hermitian()
    assert embed_single(pauli, 1, site, 4).is_hermitian()


def test_embed_local_noncontiguous_matches_products(pauli):
    full = embed_local(np.kron(X, Z), [3, 1], 2, 3)
    np.testing.assert_allclose(full, np.kron(np.kron(Z, np.eye(2)), X))


def test_chain_operator_shape_checked():
    with pytest.raises(ValueError):
        ChainOperator(np.eye(3), 2, 2)


def test_partial_trace_maximally_mixed():
    rho = np.eye(8) / 8
    np.testing.assert_allclose(partial_trace(rho, [1], n=2, L=3), np.eye(2) / 2)


def test_partial_trace_product_pure_state():
    psi = np.zeros(4)
    psi[0] = 1
    rho = np.outer(psi, psi)
    np.testing.assert_allclose(partial_trace(rho, [2], n=2, L=2), np.diag([1.0, 0.0]))


def test_partial_trace_of_product_operator():
    a, b, c = np.diag([1.0, 2]), X + 0.5 * Z, np.diag([3.0, -1])
    full = np.kron(np.kron(a, b), c)
    np.testing.assert_allclose(partial_trace(full, [2], n=2, L=3), np.trace(a) * np.trace(c) * b)
    np.testing.assert_allclose(partial_trace(full, [1, 2], n=2, L=3), np.trace(c) * np.kron(a, b))


def test_partial_trace_rejects_noncontiguous():
    with pytest.raises(NotImplementedError):
        partial_trace(np.eye(8), [1, 3], n=2, L=3)
    with pytest.raises(ValueError):
        partial_trace(np.eye(8), [], n=2, L=3)
    with pytest.raises(ValueError):
        partial_trace(np.eye(8), [4], n=2, L=3)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([[1], [2], [1, 2]]))
def test_partial_trace_random_two_qubit_states(seed, keep):
    rho = random_density(4, np.random.default_rng(seed))
    red = partial_trace(rho, keep, n=2, L=2)
    assert abs(np.trace(red) - 1) < 1e-12
    np.testing.assert_allclose(red, red.conj().T, atol=1e-12)
    ev = np.linalg.eigvalsh(red)
    assert ev.min() >= -1e-12 and ev.max() <= 1 + 1e-12


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-3, 3), st.sampled_from([[1], [2, 3], [3]]))
def test_partial_trace_linear_and_trace_preserving(seed, t, keep):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    b = rng.normal(size=(8, 8))
    lhs = partial_trace(a + t * b, keep, n=2, L=3)
    rhs = partial_trace(a, keep, n=2, L=3) + t * partial_trace(b, keep, n=2, L=3)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)
    assert abs(np.trace(partial_trace(a, keep, n=2, L=3)) - np.trace(a)) < 1e-12 * max(1, abs(np.trace(a)))
