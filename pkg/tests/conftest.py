import math
from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def rationals(lo=-4, hi=4, max_den=8):
    """Small rationals in ``[lo, hi]``; kept small so exact arithmetic stays quick."""
    return st.builds(
        lambda n, d: Fraction(n, d),
        st.integers(math.floor(lo * max_den), math.ceil(hi * max_den)),
        st.integers(1, max_den),
    ).filter(lambda q: lo <= q <= hi)


@pytest.fixture
def X():
    from csli.gallery import doubled_line

    return doubled_line()


_ACCEPTANCE: dict[int, str] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py::test_" not in report.nodeid:
        return
    n = int(report.nodeid.split("::test_")[1].split("_")[0])
    _ACCEPTANCE[n] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"ACCEPTANCE {n} {_ACCEPTANCE[n]}")
