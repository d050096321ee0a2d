from fractions import Fraction

import pytest
from hypothesis import settings

from lietwist.algebra import LieAlgebra

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def semidirect(a) -> LieAlgebra:
    """K x| K^m with [X, e_i] = sum_j a[j][i] e_j; X is index 0."""
    m = len(a)
    br = {}
    for i in range(m):
        terms = {j + 1: Fraction(a[j][i]) for j in range(m) if a[j][i]}
        if terms:
            br[(0, i + 1)] = terms
    return LieAlgebra(m + 1, br)


@pytest.fixture
def F():
    return Fraction
