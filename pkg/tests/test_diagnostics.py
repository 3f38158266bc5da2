import math
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from progsep.cohort import CohortError, grouped
from progsep.diagnostics import (
    ContingencyTable,
    UndefinedValueError,
    adjusted_subgroup_survival,
    contingency_at,
    diagnostic_summary,
    difference_curve,
    naive_subgroup_survival,
    predictive_values,
    prevalence_from_survival,
    sens_spec,
    survival_difference,
    uniform_grid,
)
from progsep.report import fmt4

from .conftest import REFERENCE_COUNTS

T2 = ContingencyTable(**REFERENCE_COUNTS)


def eq6_quotient(sens, spec, rate):
    """The factored difference written out directly from Bayes' rule."""
    prev = 1 - rate
    num = prev * (1 - prev) * (spec + sens - 1)
    den = (prev * (1 - sens) + spec * (1 - prev)) * (sens * prev + (1 - spec) * (1 - prev))
    return num / den


def test_reference_counts_from_fixture(reference):
    assert contingency_at(reference, 5) == T2


def test_nobody_positive():
    cohort = grouped([(6, 1, "low"), (7, 0, "high"), (9, 1, "high")])
    t = contingency_at(cohort, 5)
    assert (t.b, t.d) == (0, 0)


def test_four_subject_enumeration():
    cohort = grouped([(1, 1, "high"), (2, 1, "low"), (6, 1, "low"), (7, 0, "high")])
    assert contingency_at(cohort, 5) == ContingencyTable(1, 1, 1, 1)


def test_event_at_horizon_is_positive():
    cohort = grouped([(5, 1, "high"), (5.0000001, 1, "low")])
    assert contingency_at(cohort, 5) == ContingencyTable(a=1, b=0, c=0, d=1)


def test_censored_before_horizon_rejected():
    with pytest.raises(CohortError):
        contingency_at(grouped([(3, 0, "low"), (6, 1, "high")]), 5)


def test_table_validation():
    with pytest.raises(ValueError):
        ContingencyTable(0, 0, 0, 0)
    with pytest.raises(ValueError):
        ContingencyTable(-1, 1, 1, 1)


def test_sens_spec_reference():
    sens, spec = sens_spec(T2)
    assert (round(sens, 3), round(spec, 3)) == (0.553, 0.636)
    assert sens == 318 / 575 and spec == 143 / 225


@pytest.mark.parametrize(
    "table, expected",
    [(ContingencyTable(3, 5, 3, 5), (0.5, 0.5)), (ContingencyTable(4, 0, 0, 7), (1.0, 1.0))],
)
def test_sens_spec_simple(table, expected):
    assert sens_spec(table) == expected


def test_sens_spec_empty_margins():
    with pytest.raises(UndefinedValueError):
        sens_spec(ContingencyTable(3, 0, 2, 0))
    with pytest.raises(UndefinedValueError):
        sens_spec(ContingencyTable(0, 3, 0, 2))


def test_naive():
    assert naive_subgroup_survival(T2) == (0.3575, 0.205)
    assert naive_subgroup_survival(ContingencyTable(2, 2, 3, 3)) == (0.5, 0.5)
    assert naive_subgroup_survival(ContingencyTable(4, 0, 0, 7)) == (1.0, 0.0)
    with pytest.raises(UndefinedValueError):
        naive_subgroup_survival(ContingencyTable(0, 0, 1, 1))


def test_predictive_values_at_reference_rate():
    ppv, npv = predictive_values(318 / 575, 143 / 225, 0.71875)
    # at the dataset's own prevalence Bayes' rule returns the row fractions
    # d/(c+d) = 318/400 and a/(a+b) = 143/400
    assert ppv == pytest.approx(0.795, abs=1e-12)
    assert npv == pytest.approx(0.3575, abs=1e-12)


@pytest.mark.parametrize("p", [0.01, 0.3, 0.77, 0.99])
def test_perfect_test(p):
    assert predictive_values(1, 1, p) == (1.0, 1.0)


def test_uninformative():
    assert predictive_values(0.5, 0.5, 0.5) == (0.5, 0.5)


def test_undefined_ppv():
    with pytest.raises(UndefinedValueError):
        predictive_values(0.7, 1.0, 0.0)
    with pytest.raises(UndefinedValueError):
        predictive_values(1.0, 0.4, 1.0)


def test_prevalence():
    assert prevalence_from_survival(0.28125) == 0.71875
    assert prevalence_from_survival(1) == 0
    assert prevalence_from_survival(0) == 1


@pytest.mark.parametrize(
    "sens, spec, rate, expected",
    [
        (318 / 575, 143 / 225, 0.5, ("0.5871", "0.3972")),
        (318 / 575, 143 / 225, 0.1, ("0.1364", "0.0682")),
        (0.5706, 0.6374, 0.7, ("0.776", "0.5972")),
        (0.5706, 0.6374, 0.2, ("0.2707", "0.1371")),
        (0.5706, 0.6374, 0.9, ("0.9304", "0.8512")),
    ],
)
def test_adjusted_subgroup_survival(sens, spec, rate, expected):
    s_low, s_high = adjusted_subgroup_survival(sens, spec, rate)
    assert (fmt4(s_low), fmt4(s_high)) == expected


@pytest.mark.parametrize("rate", [0.0, 1.0])
def test_degenerate_rate_is_error(rate):
    with pytest.raises(UndefinedValueError):
        adjusted_subgroup_survival(0.7, 0.7, rate)
    with pytest.raises(UndefinedValueError):
        survival_difference(0.7, 0.7, rate)


@pytest.mark.parametrize(
    "sens, spec, rate, expected",
    [(0.9, 0.5, 0.2, "0.4336"), (0.5, 0.9, 0.55, "0.4911")],
)
def test_survival_difference_published(sens, spec, rate, expected):
    assert fmt4(survival_difference(sens, spec, rate)) == expected


@pytest.mark.parametrize("sens", [0.25, 0.5, 0.75])
def test_uninformative_difference_is_zero(sens):
    for rate in (0.05, 0.5, 0.93):
        assert survival_difference(sens, 1 - sens, rate) == 0


prob = st.floats(0.01, 0.99)


@given(prob, prob, prob)
def test_difference_identities(sens, spec, rate):
    d = survival_difference(sens, spec, rate)
    ppv, npv = predictive_values(sens, spec, 1 - rate)
    assert abs(d - (ppv + npv - 1)) < 1e-12
    assert abs(d - eq6_quotient(sens, spec, rate)) < 1e-12
    s_low, s_high = adjusted_subgroup_survival(sens, spec, rate)
    assert abs(d - (s_low - s_high)) < 1e-12
    for x in (ppv, npv, s_low, s_high):
        assert 0 <= x <= 1


@given(prob, prob, prob)
def test_difference_sign(sens, spec, rate):
    d = survival_difference(sens, spec, rate)
    if sens + spec > 1:
        assert d > 0
    elif sens + spec < 1:
        assert d < 0
    else:
        assert d == 0


@given(st.integers(0, 50), st.integers(0, 50), st.integers(0, 50), st.integers(0, 50))
def test_adjusted_at_own_rate_equals_naive(a, b, c, d):
    assume(min(a + b, c + d, a + c, b + d) > 0)
    table = ContingencyTable(a, b, c, d)
    sens, spec = sens_spec(table)
    rate = table.survival_rate
    assume(0 < rate < 1)
    adjusted = adjusted_subgroup_survival(sens, spec, rate)
    naive = naive_subgroup_survival(table)
    assert adjusted == pytest.approx(naive, abs=1e-9)


def test_adjusted_at_own_rate_exact_rational():
    # the same closure in rational arithmetic, for the published counts
    sens, spec = Fraction(318, 575), Fraction(143, 225)
    prev = 1 - Fraction(225, 800)
    npv = spec * (1 - prev) / (spec * (1 - prev) + prev * (1 - sens))
    ppv = sens * prev / (sens * prev + (1 - spec) * (1 - prev))
    assert (npv, 1 - ppv) == (Fraction(143, 400), Fraction(82, 400))


def test_difference_curve_zero_when_uninformative():
    assert all(d == 0 for _, d in difference_curve(0.3, 0.7, uniform_grid(0.01)))


def test_difference_curve_boundaries():
    pts = difference_curve(0.7, 0.7, [0.001, 0.999])
    assert [r for r, _ in pts] == [0.001, 0.999]
    assert all(d < 0.01 for _, d in pts)


def test_difference_curve_single_maximum():
    ds = [d for _, d in difference_curve(0.7, 0.7, uniform_grid(0.001))]
    peak = ds.index(max(ds))
    assert all(x < y for x, y in zip(ds[:peak], ds[1 : peak + 1]))
    assert all(x > y for x, y in zip(ds[peak:], ds[peak + 1 :]))


def test_difference_curve_reports_bad_point():
    with pytest.raises(UndefinedValueError, match="1.0"):
        difference_curve(0.7, 0.7, [0.5, 1.0])


def test_uniform_grid():
    grid = uniform_grid(0.001)
    assert len(grid) == 999
    assert grid[0] == 0.001 and grid[-1] == 0.999
    assert uniform_grid(0.25) == [0.25, 0.5, 0.75]
    with pytest.raises(ValueError):
        uniform_grid(0.5)


def test_diagnostic_summary_fields():
    s = diagnostic_summary(0.6, 0.8, 0.4, 5)
    assert s.s_high == 1 - s.ppv and s.s_low == s.npv
    assert s.prevalence == 0.6
    d = s.to_dict()
    assert set(d) == {"sensitivity", "specificity", "prevalence", "ppv", "npv", "s_high", "s_low", "t0"}
    assert d["t0"] == 5.0
    assert all(0 <= v <= 1 for k, v in d.items() if k != "t0")
