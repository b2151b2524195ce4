import pytest

from toriclift.fan import FIXTURE_BUILDERS

SURFACES = ["p2", "p1xp1", "f0", "f1", "f2", "f3", "f4", "blowup1_p2", "blowup2_p2"]
ALL_FIXTURES = list(FIXTURE_BUILDERS)

# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE_LINES = []


def fixture_fan(name):
    return FIXTURE_BUILDERS[name]()


@pytest.fixture(params=ALL_FIXTURES)
def any_fan(request):
    return fixture_fan(request.param)


@pytest.fixture(params=SURFACES)
def surface_fan(request):
    return fixture_fan(request.param)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
