import pytest

from groupconn.catalog import DEFAULT_CATALOG
from groupconn.certify import Replay
from groupconn.group import AbelianGroup

Z2 = AbelianGroup((2,))
Z3 = AbelianGroup((3,))
Z4 = AbelianGroup((4,))
Z22 = AbelianGroup((2, 2))


@pytest.fixture(scope="session")
def catalog():
    return DEFAULT_CATALOG


@pytest.fixture(scope="session")
def replay(catalog):
    """Shared verdict cache: each gadget's whole-set search runs once per session."""
    return Replay(catalog)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
