import os

import pytest
from hypothesis import HealthCheck, settings

from acceptance_log import RESULTS
from pdcbench.algebra import dual_numbers, kA2, sample_algebras, upper_triangular

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def A2():
    return kA2()


@pytest.fixture
def D():
    return dual_numbers()


@pytest.fixture
def UT():
    return upper_triangular()


@pytest.fixture(params=list(sample_algebras()))
def sample_algebra(request):
    return sample_algebras()[request.param]


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, title, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title} ({detail})")
