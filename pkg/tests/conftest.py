import random

import pytest
from gmpy2 import mpq
from hypothesis import settings
from hypothesis import strategies as st

from gwrec.numeric.jet import Jet, n_monomials

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

small_rationals = st.builds(lambda p, q: mpq(p, q),
                            st.integers(-6, 6), st.integers(1, 4))


@st.composite
def jets(draw, nvars=None, order=None):
    nvars = nvars if nvars is not None else draw(st.integers(1, 3))
    order = order if order is not None else draw(st.integers(0, 4))
    size = n_monomials(nvars, order)
    coeffs = draw(st.lists(small_rationals, min_size=size, max_size=size))
    return Jet(nvars, order, coeffs)


@st.composite
def jet_triples(draw):
    nvars = draw(st.integers(1, 3))
    order = draw(st.integers(0, 4))
    return tuple(draw(jets(nvars, order)) for _ in range(3))


def random_rational(rng, span=9, den=9):
    return mpq(rng.randint(-span, span), rng.randint(1, den))


@pytest.fixture
def rng():
    return random.Random(20240601)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
