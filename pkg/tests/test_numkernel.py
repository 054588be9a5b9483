import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from markov_hierarchy.errors import NotHermitian, NotPositiveDefinite, SingularBlock
from markov_hierarchy.numkernel import (
    herm_eig,
    herm_inv_sqrt,
    herm_inverse,
    herm_sqrt_pair,
    spectral_norms,
    unitary_propagator,
)
from markov_hierarchy import partition, scenario_rydberg_pair

from conftest import random_hermitian


def test_eig_pauli_x():
    np.testing.assert_allclose(herm_eig([[0, 1], [1, 0]]).eigenvalues, [-1, 1], atol=1e-15)


def test_eig_diagonal_is_permutation():
    eig = herm_eig(np.diag([3.0, -2.0, 5.0]))
    np.testing.assert_allclose(eig.eigenvalues, [-2, 3, 5])
    np.testing.assert_allclose(np.abs(eig.eigenvectors), np.eye(3)[:, [1, 0, 2]], atol=1e-15)


def test_eig_lambda_closed_form():
    # symmetric combination of g, t couples to e with 0.2*sqrt(2); antisymmetric is dark
    h = [[0, 0, 0.2], [0, 0, 0.2], [0.2, 0.2, 1]]
    root = np.sqrt(1.32)
    np.testing.assert_allclose(herm_eig(h).eigenvalues, [(1 - root) / 2, 0, (1 + root) / 2], atol=1e-14)


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        herm_eig([[0, 1], [0, 0]])


def test_eig_is_deterministic(rng):
    a = random_hermitian(rng, 6)
    e1, e2 = herm_eig(a), herm_eig(a)
    assert np.array_equal(e1.eigenvalues, e2.eigenvalues)
    assert np.array_equal(e1.eigenvectors, e2.eigenvectors)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_eig_reconstruction_and_unitarity(n, seed):
    a = random_hermitian(np.random.default_rng(seed), n)
    eig = herm_eig(a)
    v, lam = eig.eigenvectors, eig.eigenvalues
    assert np.all(np.diff(lam) >= 0)
    np.testing.assert_allclose(v @ np.diag(lam) @ v.conj().T, a, atol=1e-10)
    scale = 1 + np.max(np.abs(lam))
    assert np.max(np.abs(a @ v - v * lam)) <= 1e-11 * scale
    assert np.max(np.abs(v.conj().T @ v - np.eye(n))) <= 1e-12


def test_propagator_t0_is_identity(rng):
    np.testing.assert_allclose(unitary_propagator(random_hermitian(rng, 4), 0.0), np.eye(4), atol=1e-14)


def test_propagator_diagonal():
    u = unitary_propagator(np.diag([0.3, -1.1]), 2.5)
    np.testing.assert_allclose(u, np.diag(np.exp(-1j * np.array([0.3, -1.1]) * 2.5)), atol=1e-15)


def test_propagator_full_rabi_transfer():
    rabi = 0.2
    u = unitary_propagator([[0, rabi / 2], [rabi / 2, 0]], np.pi / rabi)
    assert abs(u[1, 0]) ** 2 == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1), st.floats(-1e3, 1e3), st.floats(-1e3, 1e3))
def test_propagator_group_property(n, seed, t1, t2):
    h = random_hermitian(np.random.default_rng(seed), n)
    u1, u2 = unitary_propagator(h, t1), unitary_propagator(h, t2)
    np.testing.assert_allclose(u1 @ unitary_propagator(h, -t1), np.eye(n), atol=1e-10)
    np.testing.assert_allclose(u1 @ u2, unitary_propagator(h, t1 + t2), atol=1e-9)
    assert np.max(np.abs(u1.conj().T @ u1 - np.eye(n))) <= 1e-11


def test_inverse_examples():
    np.testing.assert_allclose(herm_inverse(np.diag([2.0, -4.0])), np.diag([0.5, -0.25]))
    np.testing.assert_allclose(herm_inverse([[1.0]]), [[1.0]])


def test_inverse_rydberg_delta_block():
    d = (0.2**2 - 0.3**2) / 4
    sc = scenario_rydberg_pair(0.3, 0.2, 1.0, d, 5.0)
    block = partition(sc.hamiltonian, sc.plan)
    inv = herm_inverse(block.delta)
    assert np.max(np.abs(block.delta @ inv - np.eye(4))) <= 1e-10


def test_inverse_singular():
    with pytest.raises(SingularBlock):
        herm_inverse(np.diag([1.0, 0.0]))
    with pytest.raises(SingularBlock):
        herm_inverse(np.zeros((2, 2)))


def test_inv_sqrt_examples():
    np.testing.assert_allclose(herm_inv_sqrt(np.eye(3)), np.eye(3))
    np.testing.assert_allclose(herm_inv_sqrt(np.diag([4.0, 9.0])), np.diag([0.5, 1 / 3]))
    m = np.array([[1.04, 0.03], [0.03, 1.0225]])
    inv_sqrt, sqrt_m = herm_sqrt_pair(m)
    assert np.max(np.abs(inv_sqrt @ m @ inv_sqrt - np.eye(2))) <= 1e-12
    np.testing.assert_allclose(sqrt_m @ sqrt_m, m, atol=1e-14)


def test_inv_sqrt_rejects_indefinite():
    with pytest.raises(NotPositiveDefinite):
        herm_inv_sqrt(np.diag([1.0, -1.0]))


@pytest.mark.parametrize(
    "a, expected",
    [(np.diag([1.0, -3.0]), (3, 4)), (np.zeros((3, 3)), (0, 0)), ([[0, 1], [1, 0]], (1, 2))],
)
def test_spectral_norms(a, expected):
    assert spectral_norms(a) == pytest.approx(expected, abs=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_norm_duality(n, seed):
    op, tr = spectral_norms(random_hermitian(np.random.default_rng(seed), n))
    assert op <= tr + 1e-14
    assert tr <= n * op + 1e-14
