"""Tabular reports: adjusted subgroup survival over rates, difference tables, formatting."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence

from .cohort import Cohort, Group, HorizonSpec, as_horizon
from .diagnostics import (
    UndefinedValueError,
    adjusted_subgroup_survival,
    contingency_at,
    sens_spec,
    survival_difference,
)
from .survival import group_curves, km_estimate, survival_at
from .tdroc import td_sens_spec

_FOUR = Decimal("0.0001")


def round4(x: float) -> Decimal:
    """Round half-up to 4 decimal places, starting from the shortest repr of ``x``."""
    return Decimal(repr(float(x))).quantize(_FOUR, rounding=ROUND_HALF_UP)


def fmt4(x: float) -> str:
    """Half-up 4 d.p. without trailing zeros, matching the reference tables."""
    d = round4(x).normalize()
    return format(d, "f") if d != 0 else "0"


@dataclass(frozen=True)
class RateRow:
    rate: float
    s_low: float | None
    s_high: float | None
    error: str | None = None


@dataclass
class ValidationReport:
    sensitivity: float
    specificity: float
    method: str
    rows: list[RateRow]
    t0: float | None = None
    km: tuple[float, float] | None = None
    dataset_rate: float | None = None
    clamped: bool = False

    @property
    def errors(self) -> list[RateRow]:
        return [r for r in self.rows if r.error is not None]

    def table(self) -> list[tuple[str, str, str]]:
        out = [(repr(r.rate), fmt4(r.s_low), fmt4(r.s_high)) for r in self.rows if r.error is None]
        if self.km is not None:
            out.append(("KM estimate", fmt4(self.km[0]), fmt4(self.km[1])))
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rate", "s_low", "s_high"])
        w.writerows(self.table())
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "t0": self.t0,
            "method": self.method,
            "sensitivity": self.sensitivity,
            "specificity": self.specificity,
            "clamped": self.clamped,
            "dataset_survival_rate": self.dataset_rate,
            "rows": [
                {"rate": r.rate, "s_low": r.s_low, "s_high": r.s_high}
                | ({"error": r.error} if r.error else {})
                for r in self.rows
            ],
            "km_estimate": None if self.km is None else {"s_low": self.km[0], "s_high": self.km[1]},
        }


def rate_rows(sensitivity: float, specificity: float, rates: Sequence[float]) -> list[RateRow]:
    rows = []
    for rate in rates:
        try:
            s_low, s_high = adjusted_subgroup_survival(sensitivity, specificity, rate)
        except (UndefinedValueError, ValueError) as exc:
            rows.append(RateRow(rate, None, None, str(exc)))
        else:
            rows.append(RateRow(rate, s_low, s_high))
    return rows


def validate_accuracy(sensitivity: float, specificity: float, rates: Sequence[float]) -> ValidationReport:
    """Adjusted subgroup survival for fixed sensitivity/specificity, one row per rate."""
    return ValidationReport(sensitivity, specificity, "given", rate_rows(sensitivity, specificity, rates))


def validate_cohort(cohort: Cohort, t0: HorizonSpec | float, rates: Sequence[float]) -> ValidationReport:
    """Adjusted subgroup survival at ``t0`` plus the per-group KM row.

    Uncensored cohorts use the horizon contingency table; censored cohorts use
    the time-dependent KM-method estimates.
    """
    t0 = as_horizon(t0)
    cohort.require_both_groups()
    clamped = False
    if cohort.censored:
        sens, spec, clamped = td_sens_spec(cohort, t0)
        method = "time-dependent KM"
    else:
        sens, spec = sens_spec(contingency_at(cohort, t0))
        method = "contingency"
    curves = group_curves(cohort)
    km = (survival_at(curves[Group.LOW], t0), survival_at(curves[Group.HIGH], t0))
    return ValidationReport(
        sensitivity=sens,
        specificity=spec,
        method=method,
        rows=rate_rows(sens, spec, rates),
        t0=t0.t0,
        km=km,
        dataset_rate=survival_at(km_estimate(cohort.records), t0),
        clamped=clamped,
    )


@dataclass(frozen=True)
class DifferenceRow:
    sens: float
    spec: float
    pop_rate: float
    val_rate: float
    adjusted: float = field(init=False)
    naive: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "adjusted", survival_difference(self.sens, self.spec, self.pop_rate))
        object.__setattr__(self, "naive", survival_difference(self.sens, self.spec, self.val_rate))


TABLE5_HEADER = ["sens", "spec", "pop_rate", "val_rate"]


def parse_table5(text: str) -> list[tuple[float, float, float, float]]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip().lower() for h in next(reader)]
    except StopIteration:
        raise ValueError("empty file") from None
    if header != TABLE5_HEADER:
        raise ValueError(f"line 1: header must be {','.join(TABLE5_HEADER)!r}")
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 4:
            raise ValueError(f"line {lineno}: expected 4 fields, got {len(row)}")
        try:
            rows.append(tuple(float(c) for c in row))
        except ValueError:
            raise ValueError(f"line {lineno}: non-numeric field in {row!r}") from None
    if not rows:
        raise ValueError("no data rows")
    return rows


def difference_table(rows: Sequence[tuple[float, float, float, float]]) -> list[DifferenceRow]:
    out = []
    for i, (sens, spec, pop_rate, val_rate) in enumerate(rows, start=1):
        try:
            out.append(DifferenceRow(sens, spec, pop_rate, val_rate))
        except (UndefinedValueError, ValueError) as exc:
            raise type(exc)(f"row {i}: {exc}") from exc
    return out


def difference_table_csv(rows: Sequence[DifferenceRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE5_HEADER + ["difference", "naive_difference"])
    for r in rows:
        w.writerow([repr(r.sens), repr(r.spec), repr(r.pop_rate), repr(r.val_rate), fmt4(r.adjusted), fmt4(r.naive)])
    return buf.getvalue()


def difference_table_json(rows: Sequence[DifferenceRow]) -> str:
    return json.dumps(
        [
            {
                "sens": r.sens,
                "spec": r.spec,
                "pop_rate": r.pop_rate,
                "val_rate": r.val_rate,
                "difference": r.adjusted,
                "naive_difference": r.naive,
                "difference_4dp": fmt4(r.adjusted),
                "naive_difference_4dp": fmt4(r.naive),
            }
            for r in rows
        ],
        indent=2,
    )


def difference_curves_csv(curves: Sequence[tuple[tuple[float, float], list[tuple[float, float]]]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["sens", "spec", "rate", "difference"])
    for (sens, spec), points in curves:
        for rate, diff in points:
            w.writerow([repr(sens), repr(spec), repr(rate), repr(diff)])
    return buf.getvalue()
