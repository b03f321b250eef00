import logging

import pytest

from fredholm.models.schemas import SolverConfig, SolverMethod
from fredholm.services.problems import builtin
from fredholm.services.quadrature import gauss_legendre
from fredholm.services.solver import solve


@pytest.fixture(autouse=True)
def reset_logging():
    # main() binds a handler to the captured stdout of the running test
    yield
    root = logging.getLogger()
    for handler in [h for h in root.handlers if type(h) is logging.StreamHandler]:
        root.removeHandler(handler)


@pytest.fixture
def rule32():
    return gauss_legendre(32)


@pytest.fixture
def ex1():
    return builtin("paper-ex1")


@pytest.fixture
def ex2():
    return builtin("paper-ex2")


@pytest.fixture(scope="session")
def ex1_report():
    return solve(builtin("paper-ex1"), SolverConfig(quad_order=32))


@pytest.fixture(scope="session")
def ex2_report():
    return solve(builtin("paper-ex2"), SolverConfig(quad_order=32))


@pytest.fixture(scope="session")
def ex1_picard_report():
    return solve(builtin("paper-ex1"), SolverConfig(quad_order=32, method=SolverMethod.PICARD))
