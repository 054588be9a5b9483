import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from markov_hierarchy import (
    BlockHamiltonian,
    Order,
    PartitionPlan,
    compose_elimination,
    estimate_irrelevant,
    heff0,
    heff1,
    heff1_dressed,
    metric,
    partition,
    scenario_rydberg_pair,
)
from markov_hierarchy.elimination import effective
from markov_hierarchy.errors import SingularBlock, UnsupportedOrder
from markov_hierarchy.model import light_shift_detuning
from markov_hierarchy.numkernel import herm_eig, herm_sqrt_pair

from conftest import lambda_block, random_block

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 3)


def rydberg(blockade=5.0):
    d = light_shift_detuning(0.3, 0.2, 1.0)
    return scenario_rydberg_pair(0.3, 0.2, 1.0, d, blockade)


def test_heff0_lambda_numeric(fig3):
    _, block = fig3
    np.testing.assert_allclose(heff0(block).h_eff, [[-0.03125, -0.03], [-0.03, -0.03125]], atol=1e-15)


@pytest.mark.parametrize("r0, r1, det, small", [(0.4, 0.3, 1.0, 0.0), (0.2, 0.5, -2.0, 0.01), (0.1, 0.1, 3.0, -0.03)])
def test_heff0_lambda_closed_form(r0, r1, det, small):
    _, block = lambda_block(r0, r1, det, small)
    expected = -0.5 * np.array(
        [[small + r0**2 / (2 * det), r0 * r1 / (2 * det)], [r0 * r1 / (2 * det), -small + r1**2 / (2 * det)]]
    )
    np.testing.assert_allclose(heff0(block).h_eff, expected, atol=1e-15)


def test_zero_coupling_is_identity_map():
    omega = np.array([[0.1, 0.02], [0.02, -0.3]])
    block = BlockHamiltonian(omega, np.zeros((2, 1)), np.array([[2.0]]))
    for order in Order:
        model = effective(block, order)
        np.testing.assert_allclose(model.h_eff, omega, atol=1e-15)
        np.testing.assert_allclose(model.metric, np.eye(2), atol=1e-15)
        np.testing.assert_allclose(model.dressing, np.eye(2), atol=1e-15)


def test_metric_lambda(fig3):
    np.testing.assert_allclose(metric(fig3[1]), [[1.04, 0.03], [0.03, 1.0225]], atol=1e-15)


def test_heff1_lambda_inner_product(fig3):
    model = heff1(fig3[1])
    weighted = model.metric @ model.h_eff
    assert np.max(np.abs(weighted - weighted.conj().T)) < 1e-12
    assert model.order is Order.M1
    np.testing.assert_array_equal(model.dressing, np.eye(2))


def test_heff1_zero_detuning_spacing():
    _, block = lambda_block(0.4, 0.3, 1.0, 0.0)
    lam = herm_eig(heff1_dressed(block).h_eff).eigenvalues
    assert lam[1] - lam[0] == pytest.approx(0.0625 / 1.0625, abs=1e-12)


def test_estimate_irrelevant(fig3):
    _, block = fig3
    eps = estimate_irrelevant(block, [1.0, 0.0])
    np.testing.assert_allclose(eps, [-0.2], atol=1e-15)
    assert np.sum(np.abs(eps) ** 2) == pytest.approx(0.04)
    np.testing.assert_array_equal(estimate_irrelevant(block, np.zeros(2)), [0])
    rows = estimate_irrelevant(block, np.eye(2))
    np.testing.assert_allclose(rows, [[-0.2], [-0.15]])
    with pytest.raises(ValueError):
        estimate_irrelevant(block, np.ones(3))


@pytest.mark.parametrize("text, order", [("M0", Order.M0), ("markov1", Order.M1), ("m1d", Order.M1D), ("0", Order.M0)])
def test_order_parse(text, order):
    assert Order.parse(text) is order


@pytest.mark.parametrize("text", ["M2", "markov2", "M7"])
def test_unsupported_order(text):
    with pytest.raises(UnsupportedOrder):
        Order.parse(text)


@settings(max_examples=100, deadline=None)
@given(seeds, dims, dims)
def test_block_invariants(seed, m, n):
    block = random_block(np.random.default_rng(seed), m, n)
    h0 = heff0(block).h_eff
    assert np.max(np.abs(h0 - h0.conj().T)) < 1e-12
    mt = metric(block)
    assert herm_eig(mt).eigenvalues.min() >= 1 - 1e-12
    m1, m1d = heff1(block), heff1_dressed(block)
    weighted = mt @ m1.h_eff
    assert np.max(np.abs(weighted - weighted.conj().T)) < 1e-10
    np.testing.assert_allclose(
        np.sort(np.linalg.eigvals(m1.h_eff).real), herm_eig(m1d.h_eff).eigenvalues, atol=1e-10
    )
    np.testing.assert_allclose(m1d.dressing @ m1.h_eff @ np.linalg.inv(m1d.dressing), m1d.h_eff, atol=1e-10)
    inv_sqrt, sqrt_m = herm_sqrt_pair(mt)
    np.testing.assert_allclose(m1d.dressing, sqrt_m, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(seeds, dims, dims, st.floats(0.1, 10))
def test_scaling(seed, m, n, s):
    block = random_block(np.random.default_rng(seed), m, n)
    scaled = BlockHamiltonian(block.omega, s * block.coupling, s * block.delta)
    np.testing.assert_allclose(
        heff0(scaled).h_eff - block.omega, s * (heff0(block).h_eff - block.omega), atol=1e-12 * max(1, s)
    )


@settings(max_examples=50, deadline=None)
@given(seeds, dims)
def test_single_irrelevant_state_is_rank_one(seed, m):
    block = random_block(np.random.default_rng(seed), m, 1)
    sv = np.linalg.svd(heff0(block).h_eff - block.omega, compute_uv=False)
    assert np.sum(sv > 1e-12 * max(sv.max(), 1e-300)) <= 1


@settings(max_examples=50, deadline=None)
@given(seeds, dims, dims, dims)
def test_schur_consistency(seed, m, n1, n2):
    rng = np.random.default_rng(seed)
    first = random_block(rng, m + n2, n1)
    rest = random_block(rng, m, n2)
    d = m + n1 + n2
    h = np.zeros((d, d), dtype=complex)
    rel, s1, s2 = list(range(m)), list(range(m, m + n1)), list(range(m + n1, d))
    h[np.ix_(rel + s2, rel + s2)] = first.omega
    h[np.ix_(rel, s2)] = rest.coupling / 2
    h[np.ix_(s2, rel)] = rest.coupling.conj().T / 2
    h[np.ix_(s2, s2)] = rest.delta
    # relevant states couple only to stage one
    c = first.coupling.copy()
    c[:m] = 0
    h[np.ix_(rel + s2, s1)] = c / 2
    h[np.ix_(s1, rel + s2)] = c.conj().T / 2
    h[np.ix_(s1, s1)] = first.delta
    try:
        two = compose_elimination(h, PartitionPlan(tuple(rel), (tuple(s1), tuple(s2))), ["M0", "M0"])
        one = heff0(partition(h, PartitionPlan(tuple(rel), (tuple(s1 + s2),))))
    except SingularBlock:
        return
    np.testing.assert_allclose(two.h_eff, one.h_eff, atol=1e-12)


def test_compose_rydberg_two_step_equals_one_shot():
    sc = rydberg()
    two = compose_elimination(sc.hamiltonian, sc.plans["2+2+2"], ["M0", "M0"], sc.labels)
    one = heff0(partition(sc.hamiltonian, sc.plans["2+4"], sc.labels))
    np.testing.assert_allclose(two.h_eff, one.h_eff, atol=1e-12, rtol=0)
    assert two.labels == ("gg", "gr")
    assert two.stage_orders == (Order.M0, Order.M0)
    assert two.inner[0].source.irrelevant_labels == ("ee", "rr")


def test_compose_rydberg_first_order_split():
    sc = rydberg()
    two = compose_elimination(sc.hamiltonian, sc.plans["2+2+2"], ["M0", "M1"])
    one = heff1(partition(sc.hamiltonian, sc.plans["2+4"]))
    g2, g1 = np.diff(np.sort(np.linalg.eigvals(two.h_eff).real)), np.diff(np.sort(np.linalg.eigvals(one.h_eff).real))
    assert np.max(np.abs(two.h_eff - one.h_eff)) > 1e-8
    assert abs(g2[0] - g1[0]) / g1[0] < 0.01


def test_compose_single_stage_matches_one_shot(fig3):
    sc, block = fig3
    for order in Order:
        composed = compose_elimination(sc.hamiltonian, sc.plan, [order], sc.labels)
        direct = effective(block, order)
        np.testing.assert_allclose(composed.h_eff, direct.h_eff, atol=1e-15)
        assert composed.labels == direct.labels


def test_compose_rejects_inner_m1_and_bad_orders():
    sc = rydberg()
    with pytest.raises(UnsupportedOrder):
        compose_elimination(sc.hamiltonian, sc.plans["2+2+2"], ["M1", "M0"])
    with pytest.raises(ValueError):
        compose_elimination(sc.hamiltonian, sc.plans["2+2+2"], ["M0"])


def test_compose_singular_stage_is_annotated():
    h = np.diag([0.0, 0.1, 1.0, 0.0]).astype(complex)
    h[0, 2] = h[2, 0] = 0.1
    with pytest.raises(SingularBlock, match="stage 1"):
        compose_elimination(h, PartitionPlan((0, 1), ((2,), (3,))), ["M0", "M0"])
