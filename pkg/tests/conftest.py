from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from sharplab.scalars import GaussianRational
from sharplab.tensor import linear_map

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_fracs = st.fractions(min_value=-1000, max_value=1000, max_denominator=50)
gaussian = st.builds(GaussianRational, small_fracs, small_fracs)
small_ints = st.integers(-3, 3)


@st.composite
def exact_maps(draw, dom=None, cod=None, dims=st.sampled_from([(1,), (2,), (3,), (2, 2)])):
    dom = dom if dom is not None else draw(dims)
    cod = cod if cod is not None else draw(dims)
    n, m = int(np.prod(cod)), int(np.prod(dom))
    entries = [[GaussianRational(draw(small_ints), draw(small_ints)) for _ in range(m)]
               for _ in range(n)]
    return linear_map(entries, dom, cod)


@st.composite
def float_maps(draw, dom=(2,), cod=(2,)):
    n, m = int(np.prod(cod)), int(np.prod(dom))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    rng = np.random.default_rng(seed)
    return linear_map(rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m)), dom, cod, "float")


def py_matrix(f):
    """Plain nested lists of Python complex numbers, for hand-written oracles."""
    return [[complex(x) for x in row] for row in f.matrix]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


Q = Fraction


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
