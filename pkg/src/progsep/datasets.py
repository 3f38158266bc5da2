"""Bundled cohorts."""

from importlib import resources

from .cohort import Cohort, parse_cohort


def reference_cohort() -> Cohort:
    """Uncensored 400 LOW + 400 HIGH cohort with 5-year table a=143, b=257, c=82, d=318.

    Regenerate with ``scripts/make_reference_cohort.py``.
    """
    return parse_cohort(resources.files(__package__).joinpath("data/reference_cohort.csv").read_text())


def reference_path():
    return resources.files(__package__).joinpath("data/reference_cohort.csv")
