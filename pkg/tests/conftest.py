import pytest

from usedev.data import default_survey
from usedev.scenario import ScenarioConfig, run_scenario


@pytest.fixture(scope="session")
def survey():
    return default_survey()


@pytest.fixture(scope="session")
def default_report(survey):
    return run_scenario(ScenarioConfig(), survey)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one acceptance line: ``acceptance(n, title, checks)``.

    ``checks`` is a list of (description, ok) pairs; the test fails listing
    every failed check.
    """
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def record(number, title, checks):
        failed = [desc for desc, ok in checks if not ok]
        status = "PASS" if not failed else "FAIL"
        lines.append(f"{status} criterion {number}: {title} ({len(checks) - len(failed)}/{len(checks)} checks)")
        assert not failed, "failed checks:\n  " + "\n  ".join(failed)

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
