import numpy as np
import pytest
from hypothesis import strategies as st

from bqverify.algebra import Biquaternion

finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)
biquaternions = st.lists(finite, min_size=8, max_size=8).map(Biquaternion.from_reals)
vectors = st.lists(finite, min_size=6, max_size=6).map(
    lambda r: Biquaternion(0, complex(r[0], r[3]), complex(r[1], r[4]), complex(r[2], r[5])))


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[n])
