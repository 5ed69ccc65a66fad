import pytest

from polytrope.enumeration import enumerate_ccf, face_lattice
from polytrope.relations import CompleteSet

# filled by test_acceptance; printed once at the end of the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def ccf2():
    return enumerate_ccf(2)


@pytest.fixture(scope="session")
def ccf3():
    return enumerate_ccf(3)


@pytest.fixture(scope="session")
def lattice2():
    return face_lattice(2)


@pytest.fixture(scope="session")
def lattice3():
    return face_lattice(3)


def cs(n, *parts):
    """Complete set from 1-based edge lists."""
    return CompleteSet.from_edge_lists(n, parts)


@pytest.fixture
def two_loops():
    return cs(2, [(1, 1), (2, 1), (2, 2)], [(1, 1), (1, 2), (2, 2)])


@pytest.fixture
def two_cycle_ccf():
    return cs(3, [(1, 2), (2, 1), (3, 1)], [(1, 2), (2, 1), (2, 3)])
