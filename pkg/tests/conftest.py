import pytest
from hypothesis import HealthCheck, settings

from affsatake.cartan import cartan_type

settings.register_profile("desk", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("desk")


@pytest.fixture(scope="session")
def A1():
    return cartan_type("A1")


@pytest.fixture(scope="session")
def A2():
    return cartan_type("A2")


@pytest.fixture(scope="session", params=["A1", "A2"])
def ct(request):
    return cartan_type(request.param)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
