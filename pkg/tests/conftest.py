from fractions import Fraction
from pathlib import Path

import pytest

from carleson_flow import Box, DyadicCube, build_from_atoms, build_from_boxes, build_from_dyadic
from carleson_flow.instance import load_collection

FIXTURES = Path(__file__).parent / "fixtures"

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def counting():
    """Counting measure on {1, 2} with F = {{1}, {2}, {1, 2}}."""
    return load_collection(FIXTURES / "counting.json")


@pytest.fixture
def intervals():
    return build_from_boxes([Box((0,), (2,)), Box((1,), (3,))])


@pytest.fixture
def rects3():
    return load_collection(FIXTURES / "rects3.json")


@pytest.fixture
def chain3():
    return build_from_dyadic([DyadicCube(0, (0,)), DyadicCube(-1, (0,)), DyadicCube(-2, (0,))])


@pytest.fixture
def duplicated():
    return build_from_boxes([Box((0,), (1,)), Box((0,), (1,)), Box((2,), (3,))], ids=["A", "B", "C"])


@pytest.fixture
def disjoint():
    return load_collection(FIXTURES / "disjoint.json")


@pytest.fixture
def single():
    return build_from_atoms([("Q", None)], [(["Q"], Fraction(1))])
