"""Time-dependent sensitivity and specificity of a binary risk label from censored data.

Kaplan-Meier method: with ``S_h``, ``S_l`` and ``S`` the HIGH, LOW and pooled
KM survival at the horizon and ``p_h`` the HIGH fraction of the cohort,

    sensitivity = (1 - S_h) * p_h / (1 - S)
    specificity = S_l * (1 - p_h) / S

Everything is evaluated in exact rational arithmetic and rounded once, so on
uncensored data the result is bit-identical to the plain contingency-table
estimate.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .cohort import Cohort, Group, HorizonSpec, as_horizon
from .diagnostics import DiagnosticSummary, UndefinedValueError, diagnostic_summary
from .survival import km_estimate, survival_at_exact


class TimeDependentAccuracy(NamedTuple):
    sensitivity: float
    specificity: float
    clamped: bool = False


def _clamp(x: Fraction) -> tuple[Fraction, bool]:
    if x < 0:
        return Fraction(0), True
    if x > 1:
        return Fraction(1), True
    return x, False


def td_sens_spec(cohort: Cohort, t0: HorizonSpec | float) -> TimeDependentAccuracy:
    """Sensitivity and specificity of the HIGH label for failure by ``t0``.

    Raw estimates outside [0, 1] are clamped and reported through
    ``clamped``.
    """
    t0 = as_horizon(t0)
    cohort.require_both_groups()
    high = cohort.group(Group.HIGH)
    low = cohort.group(Group.LOW)

    s_pooled = survival_at_exact(km_estimate(cohort.records), t0)
    if s_pooled in (0, 1):
        raise UndefinedValueError(
            f"pooled survival at t0={t0.t0} is {float(s_pooled)}; must lie strictly in (0, 1)"
        )
    s_high = survival_at_exact(km_estimate(high), t0)
    s_low = survival_at_exact(km_estimate(low), t0)
    p_high = Fraction(len(high), len(cohort))

    sens, c1 = _clamp((1 - s_high) * p_high / (1 - s_pooled))
    spec, c2 = _clamp(s_low * (1 - p_high) / s_pooled)
    return TimeDependentAccuracy(float(sens), float(spec), c1 or c2)


def td_diagnostic_summary(
    cohort: Cohort, t0: HorizonSpec | float, pop_survival_rate: float
) -> DiagnosticSummary:
    acc = td_sens_spec(cohort, t0)
    return diagnostic_summary(acc.sensitivity, acc.specificity, pop_survival_rate, t0)
