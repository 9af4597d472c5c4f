import pytest

from critlab.ode import solve_system


@pytest.fixture(scope="session")
def bf_sol():
    return solve_system()


@pytest.fixture(scope="session")
def er_sol():
    return solve_system(model="er")
