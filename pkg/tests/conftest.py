import pytest

from realforms import Q, euclid, laurent, parse_field, quad_ext


@pytest.fixture
def QQ():
    return Q


@pytest.fixture
def Q2():
    return quad_ext(Q, 2)


@pytest.fixture
def Qt():
    return laurent(Q)


@pytest.fixture
def Q2t():
    return parse_field("laurent(quadext(Q, 2))")


@pytest.fixture
def R():
    return euclid(Q)


@pytest.fixture
def Rt():
    return laurent(euclid(Q))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
