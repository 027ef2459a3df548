import numpy as np
import pytest

from belgauge.numlin import BipartiteShape
from belgauge.states import maximally_entangled, product_state, pure_to_density


@pytest.fixture
def bell():
    return maximally_entangled(2)


@pytest.fixture
def bell_rho(bell):
    return pure_to_density(bell)


@pytest.fixture
def product():
    return product_state([1, 0], [1, 0])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


SHAPES = [BipartiteShape(2, 2), BipartiteShape(2, 5), BipartiteShape(3, 3), BipartiteShape(4, 4)]


ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def criterion(request):
    """Record ``(number, passed, detail)`` as one acceptance line, then assert it."""

    def record(number: int, passed: bool, detail: str):
        ACCEPTANCE_LINES[number] = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        print(ACCEPTANCE_LINES[number])
        assert passed, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
