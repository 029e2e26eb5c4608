from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from bslab.polycore import AmbientRing, Polynomial

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ZW = AmbientRing(("z", "w"))
XYZ = AmbientRing(("x", "y", "z"))


@pytest.fixture
def zw():
    return ZW


@pytest.fixture
def xyz():
    return XYZ


def polynomials(ring, max_degree=4, max_terms=5):
    exps = st.lists(st.integers(0, max_degree), min_size=ring.nvars, max_size=ring.nvars).map(tuple)
    coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(lambda c: c != 0)
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(lambda d: Polynomial(ring, d))


def monomials(ring, max_degree=4):
    exps = st.lists(st.integers(0, max_degree), min_size=ring.nvars, max_size=ring.nvars).map(tuple)
    return exps.map(lambda e: Polynomial(ring, {e: Fraction(1)}))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
