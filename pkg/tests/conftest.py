import pytest
from hypothesis import HealthCheck, settings

from legweb.symkernel import symbol

settings.register_profile("legweb", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("legweb")

for _n in ("x", "y", "z", "u", "v"):
    symbol(_n)


@pytest.fixture(scope="session")
def reference():
    from legweb.numgeom import reference_cubic
    return reference_cubic()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
