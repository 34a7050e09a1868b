from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from toeplitz_cubature.scalars import GaussRational, parse_complex

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

# (a, c) pairs used across suites; the last one has complex c(c - a)
PARAM_SET = [("1", "1"), ("2", "1"), ("3/2", "1"), ("1+i", "-1-i")]
VALID_SET = [("1", "1"), ("3/2", "1"), ("1/2", "1")]


def P(text: str) -> GaussRational:
    return parse_complex(text, exact=True)


small_fraction = st.fractions(min_value=-3, max_value=3, max_denominator=6)
gauss = st.builds(GaussRational, small_fraction, small_fraction)
nonzero_gauss = gauss.filter(lambda v: v != 0)


@pytest.fixture
def params():
    return [(P(a), P(c)) for a, c in PARAM_SET]


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
