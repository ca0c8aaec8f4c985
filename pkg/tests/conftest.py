import sys

import hypothesis.strategies as st
from hypothesis import settings

from tvariants import Transformation

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def transformations(draw, n=None, min_degree=1, max_degree=6):
    if n is None:
        n = draw(st.integers(min_degree, max_degree))
    return Transformation(draw(st.lists(st.integers(1, n), min_size=n, max_size=n)))


@st.composite
def permutations(draw, n):
    return Transformation(draw(st.permutations(range(1, n + 1))))


@st.composite
def same_degree(draw, k, min_degree=1, max_degree=6):
    n = draw(st.integers(min_degree, max_degree))
    return tuple(draw(transformations(n)) for _ in range(k))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
