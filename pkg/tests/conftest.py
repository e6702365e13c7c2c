import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "translab",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("translab")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def cvec(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import CRITERIA, RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, _ in CRITERIA:
        terminalreporter.write_line(RESULTS.get(number, f"criterion {number:2d} {name:<21} NOT RUN"))
