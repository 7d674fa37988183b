import pytest

from maasskit.corpus import eisenstein_spec


@pytest.fixture(scope="session")
def eis25():
    return eisenstein_spec(0.25, 2000)


@pytest.fixture(scope="session")
def eis04i():
    return eisenstein_spec(0.4j, 2000)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
