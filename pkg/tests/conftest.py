import numpy as np
import pytest

from markov_hierarchy import BlockHamiltonian, partition, scenario_lambda
from markov_hierarchy.model import light_shift_detuning

ACCEPTANCE_LINES: list[str] = []


def lambda_block(rabi0=0.4, rabi1=0.3, detuning=1.0, two_photon=None):
    if two_photon is None:
        two_photon = light_shift_detuning(rabi0, rabi1, detuning)
    sc = scenario_lambda(rabi0, rabi1, detuning, two_photon)
    return sc, partition(sc.hamiltonian, sc.plan, sc.labels)


@pytest.fixture
def fig3():
    return lambda_block()


@pytest.fixture
def rng():
    return np.random.default_rng(20130402)


def random_hermitian(rng, n, scale=1.0):
    a = rng.uniform(-1, 1, (n, n)) + 1j * rng.uniform(-1, 1, (n, n))
    return scale * (a + a.conj().T) / 2


def random_block(rng, m, n, coupling_ratio=0.3):
    """Valid block with |delta| eigenvalues in [1, 3] and |Omega| <= ratio * |delta|."""
    omega = random_hermitian(rng, m, 0.2)
    q, _ = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    lam = rng.uniform(1, 3, n) * rng.choice([-1, 1], n)
    delta = q @ np.diag(lam) @ q.conj().T
    delta = (delta + delta.conj().T) / 2
    c = rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n))
    c *= rng.uniform(0.05, 1) * coupling_ratio * np.max(np.abs(lam)) / np.linalg.norm(c, 2)
    return BlockHamiltonian(omega, c, delta)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
