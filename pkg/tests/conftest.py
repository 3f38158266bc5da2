import pytest

from progsep.cohort import grouped
from progsep.datasets import reference_cohort

# 5-year contingency counts of the published uncensored example
REFERENCE_COUNTS = dict(a=143, b=257, c=82, d=318)


@pytest.fixture(scope="session")
def reference():
    return reference_cohort()


@pytest.fixture
def six_subjects():
    """LOW fails at 1, 3, 5; HIGH fails at 2, 4, 6; nobody censored."""
    return grouped(
        [(1, 1, "low"), (2, 1, "high"), (3, 1, "low"), (4, 1, "high"), (5, 1, "low"), (6, 1, "high")]
    )


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
