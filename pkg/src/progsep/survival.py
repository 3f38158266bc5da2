"""Kaplan-Meier curves, log-rank test and O/E hazard ratio for two risk groups."""

from __future__ import annotations

import bisect
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import NormalDist
from typing import Sequence

from .cohort import Cohort, Group, HorizonSpec, SubjectRecord, as_horizon
from .special import chi2_sf


class SurvivalError(ValueError):
    pass


@dataclass(frozen=True)
class CurvePoint:
    t: float
    s: float
    n_at_risk: int
    n_events: int


@dataclass(frozen=True)
class SurvivalCurve:
    """Right-continuous product-limit step function.

    One point per distinct event time. ``exact`` holds the survival values as
    fractions; ``points[i].s`` is the nearest float to ``exact[i]``.
    """

    points: tuple[CurvePoint, ...]
    n_total: int
    exact: tuple[Fraction, ...] = field(default=(), repr=False, compare=False)

    @property
    def times(self) -> list[float]:
        return [p.t for p in self.points]

    @property
    def survival(self) -> list[float]:
        return [p.s for p in self.points]

    def to_csv(self) -> str:
        rows = ["t,s,n_at_risk,n_events"]
        rows += [f"{p.t!r},{p.s!r},{p.n_at_risk},{p.n_events}" for p in self.points]
        return "\n".join(rows) + "\n"

    def to_dict(self) -> dict:
        return {
            "n_total": self.n_total,
            "points": [
                {"t": p.t, "s": p.s, "n_at_risk": p.n_at_risk, "n_events": p.n_events}
                for p in self.points
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def km_estimate(records: Sequence[SubjectRecord]) -> SurvivalCurve:
    """Kaplan-Meier estimate; events precede censorings at tied times."""
    records = list(records)
    if not records:
        raise SurvivalError("cannot estimate a survival curve from no records")

    deaths = Counter(r.time for r in records if r.event)
    exits = Counter(r.time for r in records)
    at_risk = len(records)
    s = Fraction(1)
    points, exact = [], []
    for t in sorted(exits):
        d = deaths.get(t, 0)
        if d:
            s *= Fraction(at_risk - d, at_risk)
            points.append(CurvePoint(t, float(s), at_risk, d))
            exact.append(s)
        at_risk -= exits[t]
    return SurvivalCurve(tuple(points), len(records), tuple(exact))


def _index_at(curve: SurvivalCurve, t0: float) -> int:
    # number of steps at or before t0
    return bisect.bisect_right(curve.times, t0)


def survival_at(curve: SurvivalCurve, t0: HorizonSpec | float) -> float:
    """Evaluate the curve at ``t0``; an event exactly at ``t0`` counts as failed."""
    i = _index_at(curve, as_horizon(t0).t0)
    return 1.0 if i == 0 else curve.points[i - 1].s


def survival_at_exact(curve: SurvivalCurve, t0: HorizonSpec | float) -> Fraction:
    i = _index_at(curve, as_horizon(t0).t0)
    return Fraction(1) if i == 0 else curve.exact[i - 1]


@dataclass(frozen=True)
class LogRankResult:
    chi_square: float
    p_value: float
    observed: tuple[int, int]
    expected: tuple[float, float]
    variance: float

    def to_dict(self) -> dict:
        return {
            "chi_square": self.chi_square,
            "p_value": self.p_value,
            "observed": {"low": self.observed[0], "high": self.observed[1]},
            "expected": {"low": self.expected[0], "high": self.expected[1]},
        }


@dataclass(frozen=True)
class HazardRatioResult:
    hr: float
    ci_low: float
    ci_high: float
    level: float = 0.95

    def to_dict(self) -> dict:
        return {"hr": self.hr, "ci_low": self.ci_low, "ci_high": self.ci_high, "level": self.level}


@dataclass(frozen=True)
class _LogRankSums:
    o_low: int
    o_high: int
    e_low: Fraction
    e_high: Fraction
    var: Fraction


def _log_rank_sums(cohort: Cohort) -> _LogRankSums:
    cohort.require_both_groups()
    times = sorted({r.time for r in cohort.records})
    by_time = {t: [0, 0, 0, 0] for t in times}  # low events, high events, low exits, high exits
    for r in cohort.records:
        k = 0 if r.group is Group.LOW else 1
        cell = by_time[r.time]
        cell[k] += int(r.event)
        cell[2 + k] += 1

    n_low = sum(1 for r in cohort.records if r.group is Group.LOW)
    n_high = len(cohort) - n_low
    o_low = o_high = 0
    e_low = var = Fraction(0)
    for t in times:
        d_low, d_high, x_low, x_high = by_time[t]
        d = d_low + d_high
        if d:
            n = n_low + n_high
            e_low += Fraction(d * n_low, n)
            if n > 1:
                var += Fraction(d * n_low * n_high * (n - d), n * n * (n - 1))
            o_low += d_low
            o_high += d_high
        n_low -= x_low
        n_high -= x_high

    if o_low + o_high == 0:
        raise SurvivalError("log-rank test needs at least one event")
    return _LogRankSums(o_low, o_high, e_low, o_low + o_high - e_low, var)


def log_rank(cohort: Cohort) -> LogRankResult:
    """Two-group log-rank test with hypergeometric variance, 1 degree of freedom."""
    sums = _log_rank_sums(cohort)
    if sums.var == 0:
        raise SurvivalError("log-rank variance is zero; no informative event times")
    chi = (sums.o_low - sums.e_low) ** 2 / sums.var
    chi_square = float(chi)
    return LogRankResult(
        chi_square=chi_square,
        p_value=chi2_sf(chi_square, 1),
        observed=(sums.o_low, sums.o_high),
        expected=(float(sums.e_low), float(sums.e_high)),
        variance=float(sums.var),
    )


def hazard_ratio(cohort: Cohort, level: float = 0.95) -> HazardRatioResult:
    """HIGH vs LOW hazard ratio (O_high/E_high)/(O_low/E_low) with a log-scale CI."""
    if not 0 < level < 1:
        raise ValueError(f"confidence level must be in (0, 1), got {level!r}")
    sums = _log_rank_sums(cohort)
    if sums.o_low == 0 or sums.o_high == 0:
        raise SurvivalError("hazard ratio undefined: a group has no events")
    ratio = (sums.o_high / sums.e_high) / (sums.o_low / sums.e_low)
    hr = float(ratio)
    z = NormalDist().inv_cdf(0.5 + level / 2)
    half = z * math.sqrt(float(1 / sums.e_low + 1 / sums.e_high))
    log_hr = math.log(ratio.numerator) - math.log(ratio.denominator)
    return HazardRatioResult(
        hr=hr,
        ci_low=min(hr, math.exp(log_hr - half)),
        ci_high=max(hr, math.exp(log_hr + half)),
        level=level,
    )


def group_curves(cohort: Cohort) -> dict[Group, SurvivalCurve]:
    cohort.require_both_groups()
    return {g: km_estimate(cohort.group(g)) for g in Group}
