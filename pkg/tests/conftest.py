from fractions import Fraction
from pathlib import Path

import pytest

from nonperiod.semialg import BasicDomain, IntPolynomial, load_domain

DOMAINS = Path(__file__).resolve().parent.parent / "domains"

# eps_1..eps_80, five rows of sixteen
EPSILON_TABLE = [
    int(c)
    for c in "1011111101011011" "0111111011010110" "1101011111111110" "1101111110011011" "0101101110111111"
]
HALF_ALPHA_30 = "388832221773824641256243009581"

# independently sourced constants, 20 decimals
PI_20 = Fraction("3.14159265358979323846")
LN2_20 = Fraction("0.69314718055994530942")

_ACCEPTANCE_LINES = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def _xy():
    return IntPolynomial.variable(2, 0), IntPolynomial.variable(2, 1)


@pytest.fixture(scope="session")
def disc():
    return load_domain(DOMAINS / "disc.json")


@pytest.fixture(scope="session")
def log2_region():
    return load_domain(DOMAINS / "log2.json")


@pytest.fixture(scope="session")
def interval():
    return load_domain(DOMAINS / "interval.json")


@pytest.fixture(scope="session")
def dimple():
    # unit square minus a disc of radius 1/20 at the centre; odd grids leave
    # cubes next to the hole undecided at level 0
    X, Y = _xy()
    return BasicDomain(2, Fraction(1), [100 * ((2 * X - 1) ** 2 + (2 * Y - 1) ** 2) - 1])


@pytest.fixture(scope="session")
def annulus():
    return load_domain(DOMAINS / "annulus.json")
