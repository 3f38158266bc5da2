"""Horizon contingency tables, predictive values and prevalence-adjusted subgroup survival.

At a horizon ``t0`` a subject is *positive* if it failed at or before ``t0``
and *negative* if it survived past ``t0``. Crossing that with the predicted
risk group gives the 2x2 table::

                 negative   positive
    LOW-risk        a (TN)     b (FN)
    HIGH-risk       c (FP)     d (TP)

The survival of each predicted subgroup at ``t0`` is then a predictive value:
``S_high = 1 - PPV`` and ``S_low = NPV``, both of which depend on the
prevalence ``1 - S(t0)`` of the population the subgroups are drawn from.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Iterable

from .cohort import Cohort, CohortError, Group, HorizonSpec, Schema, as_horizon


class UndefinedValueError(ArithmeticError):
    """A ratio whose denominator vanishes for the given inputs."""


@dataclass(frozen=True)
class ContingencyTable:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in "abcd":
            value = getattr(self, name)
            if int(value) != value or value < 0:
                raise ValueError(f"cell {name} must be a non-negative integer, got {value!r}")
        if self.a + self.b + self.c + self.d < 1:
            raise ValueError("contingency table is empty")

    @property
    def total(self) -> int:
        return self.a + self.b + self.c + self.d

    @property
    def survival_rate(self) -> float:
        """Fraction of the table that is negative (survived past the horizon)."""
        return (self.a + self.c) / self.total


@dataclass(frozen=True)
class DiagnosticSummary:
    sensitivity: float
    specificity: float
    prevalence: float
    ppv: float
    npv: float
    s_high: float
    s_low: float
    t0: HorizonSpec

    def to_dict(self) -> dict:
        d = asdict(self)
        d["t0"] = self.t0.t0
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _check_prob(name: str, value: float) -> None:
    if not (0.0 <= value <= 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")


def contingency_at(cohort: Cohort, t0: HorizonSpec | float) -> ContingencyTable:
    """Cross predicted group with failure status at ``t0``.

    Subjects censored at or before ``t0`` have unknown status; use
    :func:`progsep.tdroc.td_sens_spec` for such data.
    """
    t0 = as_horizon(t0).t0
    cohort._require(Schema.GROUPED)
    cells = {"a": 0, "b": 0, "c": 0, "d": 0}
    for i, rec in enumerate(cohort.records, start=1):
        if rec.time <= t0 and not rec.event:
            raise CohortError(
                f"record {i} is censored at {rec.time} <= t0={t0}; status at horizon unknown"
            )
        positive = rec.time <= t0
        if rec.group is Group.LOW:
            cells["b" if positive else "a"] += 1
        else:
            cells["d" if positive else "c"] += 1
    return ContingencyTable(**cells)


def sens_spec(table: ContingencyTable) -> tuple[float, float]:
    if table.b + table.d == 0:
        raise UndefinedValueError("no positive subjects; sensitivity undefined")
    if table.a + table.c == 0:
        raise UndefinedValueError("no negative subjects; specificity undefined")
    return table.d / (table.b + table.d), table.a / (table.a + table.c)


def naive_subgroup_survival(table: ContingencyTable) -> tuple[float, float]:
    """Within-subgroup fraction surviving past the horizon, as ``(s_low, s_high)``."""
    if table.a + table.b == 0:
        raise UndefinedValueError("LOW-risk row is empty")
    if table.c + table.d == 0:
        raise UndefinedValueError("HIGH-risk row is empty")
    return table.a / (table.a + table.b), table.c / (table.c + table.d)


def predictive_values(sensitivity: float, specificity: float, prevalence: float) -> tuple[float, float]:
    """Return ``(ppv, npv)`` from sensitivity, specificity and prevalence by Bayes' rule."""
    _check_prob("sensitivity", sensitivity)
    _check_prob("specificity", specificity)
    _check_prob("prevalence", prevalence)
    true_pos = sensitivity * prevalence
    false_pos = (1 - specificity) * (1 - prevalence)
    true_neg = specificity * (1 - prevalence)
    false_neg = prevalence * (1 - sensitivity)
    if true_pos + false_pos == 0:
        raise UndefinedValueError(
            f"PPV undefined for sens={sensitivity}, spec={specificity}, prev={prevalence}"
        )
    if true_neg + false_neg == 0:
        raise UndefinedValueError(
            f"NPV undefined for sens={sensitivity}, spec={specificity}, prev={prevalence}"
        )
    return true_pos / (true_pos + false_pos), true_neg / (true_neg + false_neg)


def prevalence_from_survival(pop_survival_rate: float) -> float:
    _check_prob("population survival rate", pop_survival_rate)
    return 1 - pop_survival_rate


def _check_rate(pop_survival_rate: float) -> None:
    _check_prob("population survival rate", pop_survival_rate)
    if pop_survival_rate in (0.0, 1.0):
        raise UndefinedValueError(
            f"population survival rate {pop_survival_rate} is degenerate; must lie in (0, 1)"
        )


def adjusted_subgroup_survival(
    sensitivity: float, specificity: float, pop_survival_rate: float
) -> tuple[float, float]:
    """Subgroup survival at the horizon for a population with the given survival rate.

    Returns ``(s_low, s_high) = (NPV, 1 - PPV)`` with prevalence
    ``1 - pop_survival_rate``.
    """
    _check_rate(pop_survival_rate)
    ppv, npv = predictive_values(
        sensitivity, specificity, prevalence_from_survival(pop_survival_rate)
    )
    return npv, 1 - ppv


def survival_difference(sensitivity: float, specificity: float, pop_survival_rate: float) -> float:
    """``S_low - S_high`` at the horizon, equal to ``PPV + NPV - 1``.

    Evaluated from the factored closed form, which is zero exactly when
    ``sensitivity + specificity == 1``.
    """
    _check_rate(pop_survival_rate)
    _check_prob("sensitivity", sensitivity)
    _check_prob("specificity", specificity)
    prev = prevalence_from_survival(pop_survival_rate)
    neg_side = prev * (1 - sensitivity) + specificity * (1 - prev)
    pos_side = sensitivity * prev + (1 - specificity) * (1 - prev)
    if neg_side == 0 or pos_side == 0:
        raise UndefinedValueError(
            f"difference undefined for sens={sensitivity}, spec={specificity}, rate={pop_survival_rate}"
        )
    return prev * (1 - prev) * (specificity + sensitivity - 1) / (neg_side * pos_side)


def difference_curve(
    sensitivity: float, specificity: float, grid: Iterable[float]
) -> list[tuple[float, float]]:
    out = []
    for rate in grid:
        if not 0 < rate < 1:
            raise UndefinedValueError(f"grid value {rate!r} outside (0, 1)")
        try:
            out.append((rate, survival_difference(sensitivity, specificity, rate)))
        except UndefinedValueError as exc:
            raise UndefinedValueError(f"at rate {rate!r}: {exc}") from exc
    return out


def uniform_grid(step: float) -> list[float]:
    """Interior points ``step, 2*step, ...`` of (0, 1)."""
    if not 0 < step < 0.5:
        raise ValueError(f"grid step must lie in (0, 0.5), got {step!r}")
    n = math.ceil(1 / step - 1e-9)
    return [round(i * step, 12) for i in range(1, n) if i * step < 1]


def diagnostic_summary(
    sensitivity: float, specificity: float, pop_survival_rate: float, t0: HorizonSpec | float
) -> DiagnosticSummary:
    _check_rate(pop_survival_rate)
    prev = prevalence_from_survival(pop_survival_rate)
    ppv, npv = predictive_values(sensitivity, specificity, prev)
    return DiagnosticSummary(
        sensitivity=sensitivity,
        specificity=specificity,
        prevalence=prev,
        ppv=ppv,
        npv=npv,
        s_high=1 - ppv,
        s_low=npv,
        t0=as_horizon(t0),
    )
