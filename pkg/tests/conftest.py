import numpy as np
import pytest

from accretive.operator import ConstantOperator, DiagonalOperator, LinearOperator
from accretive.space import euclidean, lp

M2 = [[2.0, 1.0], [1.0, 3.0]]


def make_ops():
    """One instance of each operator kind in dimension 2."""
    return {
        "constant": ConstantOperator([1.0, -0.5]),
        "linear": LinearOperator(M2, [0.5, -0.5]),
        "diagonal": DiagonalOperator([{"type": "power", "exp": 3}, {"type": "exp", "coef": 0.5}]),
    }


@pytest.fixture(params=["euclidean", "l3"])
def space2(request):
    return euclidean(2) if request.param == "euclidean" else lp(2, 3.0)


@pytest.fixture
def ops():
    return make_ops()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for num in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[num])
