import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from braidsig.braid import BraidWord

settings.register_profile(
    "default", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=1000, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def words(strands=3, min_size=0, max_size=20):
    return st.lists(st.integers(1, strands - 1), min_size=min_size, max_size=max_size).map(
        lambda xs: BraidWord(strands, tuple(xs))
    )


def any_words(max_strands=5, min_size=0, max_size=16):
    return st.integers(2, max_strands).flatmap(lambda n: words(n, min_size, max_size))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.RESULTS, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
