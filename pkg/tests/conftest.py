import numpy as np
import pytest

from solitonlab.soliton_zoo import build_phi, solve_profile_ode

# phi(0) for beta = 1, frozen from an independent scipy quadrature of the step
GOLDEN_C = 0.8622250517310728


@pytest.fixture(scope="session")
def phi():
    return build_phi()


@pytest.fixture(scope="session")
def profile():
    return solve_profile_ode()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
