import numpy as np
import pytest

from thermoscale.chain import build_hamiltonian, sample_random_model
from thermoscale.operators import build_generators
from thermoscale.spectra import diagonalize


def random_density(dim, rng):
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = x @ x.conj().T
    return rho / np.trace(rho).real


@pytest.fixture(scope="session")
def pauli():
    return build_generators(2)


@pytest.fixture(scope="session")
def chain8():
    """One random 8-spin realization at lambda = 1: (spec, H, spectrum)."""
    spec = sample_random_model(11, 1.0).to_spec(8)
    H = build_hamiltonian(spec)
    return spec, H, diagonalize(H)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one acceptance line: criterion(label, passed, detail)."""
    def record(label, passed, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {label}  {detail}".rstrip())
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
