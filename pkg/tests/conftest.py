import random
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from looijenga import samplers
from looijenga.qform import QuadraticForm

settings.register_profile(
    "repo", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")


@pytest.fixture
def a1():
    return QuadraticForm.from_matrix([[2]])


@pytest.fixture
def a2():
    return QuadraticForm.from_matrix([[2, -1], [-1, 2]])


@pytest.fixture
def diag22():
    return QuadraticForm.from_matrix([[2, 0], [0, 2]])


@pytest.fixture
def rng():
    return random.Random(20240611)


small_ints = st.integers(min_value=-5, max_value=5)


@st.composite
def int_matrices(draw, rows, cols, bound=5):
    return tuple(tuple(draw(st.integers(-bound, bound)) for _ in range(cols)) for _ in range(rows))


@st.composite
def seeded(draw):
    """A ``random.Random`` seeded from hypothesis, for the library samplers."""
    return random.Random(draw(st.integers(min_value=0, max_value=2**32 - 1)))


@st.composite
def ambient(draw, rs=(2, 3), ds=(0, 1, 2, 3), es=(0, 1, 2)):
    """``(rng, q, r)`` with a random form of random shape."""
    rng = draw(seeded())
    r, d, e = draw(st.sampled_from(rs)), draw(st.sampled_from(ds)), draw(st.sampled_from(es))
    return rng, samplers.quadratic_form(rng, d, e), r


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = module.summary_lines() if module is not None else []
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
