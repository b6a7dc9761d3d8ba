import numpy as np
import pytest

from dal.model import ModelParams

# Reference parameter sets shared by the tests.
FIG3 = ModelParams(omega_c=0.55, j=-0.62, j_c=0.01, gamma=1e-3, gamma_c=1e-3)
FIG5 = ModelParams(omega_c=0.55, j=0.62, j_c=0.01, gamma=1e-3, gamma_c=1e-3)
ENHANCED = ModelParams(omega_c=0.55, j=-0.62, j_c=0.01, gamma=1e-3, gamma_c=0.04)
OPTIMUM = ModelParams(omega_c=-0.74, j=-0.31, j_c=0.01, gamma=1e-3, gamma_c=0.03)
DECOUPLED = ModelParams(omega_c=0.5, j=0.0, j_c=0.0, gamma=1e-3, gamma_c=1e-3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_density(rng, d=8, rank=None):
    rank = rank or d
    x = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = x @ x.conj().T
    return rho / np.trace(rho)


def random_hermitian(rng, d):
    x = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (x + x.conj().T) / 2


def random_unitary(rng, d):
    q, r = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


_acceptance = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    ok = call.excinfo is None
    prev = _acceptance.get(number, (title, True))
    _acceptance[number] = (title, prev[1] and ok)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        title, ok = _acceptance[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")
