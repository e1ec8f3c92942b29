import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from airybeam import ArrayGeometry, carrier_from_frequency

settings.register_profile("repo", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@pytest.fixture(scope="session")
def u6g():
    return carrier_from_frequency(7e9)


@pytest.fixture(scope="session")
def mmwave():
    return carrier_from_frequency(30e9)


@pytest.fixture(scope="session")
def array256(u6g):
    return ArrayGeometry.half_wavelength(u6g, 256)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: one check per acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
