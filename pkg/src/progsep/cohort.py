"""Right-censored survival cohorts: records, CSV ingestion and dichotomisation."""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, replace
from typing import Iterable


class CohortError(ValueError):
    """Raised for malformed or invalid cohort input.

    ``line`` is the 1-based line number of the offending CSV row when the
    error comes from parsing.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Group(enum.Enum):
    LOW = "low"
    HIGH = "high"


class Schema(enum.Enum):
    GROUPED = "group"
    MARKER = "marker"


@dataclass(frozen=True)
class SubjectRecord:
    """One subject: follow-up time in years, event flag, and a group or marker."""

    time: float
    event: bool
    group: Group | None = None
    marker: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.time) and self.time > 0):
            raise CohortError(f"time must be positive and finite, got {self.time!r}")
        if (self.group is None) == (self.marker is None):
            raise CohortError("exactly one of group or marker must be set")
        if self.marker is not None and not math.isfinite(self.marker):
            raise CohortError(f"marker must be finite, got {self.marker!r}")

    @property
    def schema(self) -> Schema:
        return Schema.GROUPED if self.group is not None else Schema.MARKER


@dataclass(frozen=True)
class HorizonSpec:
    t0: float

    def __post_init__(self):
        if not (math.isfinite(self.t0) and self.t0 > 0):
            raise ValueError(f"horizon must be positive and finite, got {self.t0!r}")


def as_horizon(t0: HorizonSpec | float) -> HorizonSpec:
    return t0 if isinstance(t0, HorizonSpec) else HorizonSpec(float(t0))


@dataclass(frozen=True)
class Cohort:
    records: tuple[SubjectRecord, ...]
    schema: Schema

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        if not self.records:
            raise CohortError("cohort is empty")
        for rec in self.records:
            if rec.schema is not self.schema:
                raise CohortError(
                    f"record {rec!r} does not match cohort schema {self.schema.name}"
                )

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def censored(self) -> bool:
        return not all(rec.event for rec in self.records)

    def group(self, group: Group) -> list[SubjectRecord]:
        self._require(Schema.GROUPED)
        return [rec for rec in self.records if rec.group is group]

    def require_both_groups(self) -> None:
        self._require(Schema.GROUPED)
        present = {rec.group for rec in self.records}
        missing = [g.name for g in Group if g not in present]
        if missing:
            raise CohortError(f"cohort has no {', '.join(missing)} records")

    def _require(self, schema: Schema) -> None:
        if self.schema is not schema:
            raise CohortError(
                f"expected a {schema.name} cohort, got {self.schema.name}"
            )


def _parse_event(token: str, line: int) -> bool:
    token = token.strip()
    if token == "1":
        return True
    if token == "0":
        return False
    raise CohortError(f"event must be 0 or 1, got {token!r}", line)


def _parse_real(token: str, name: str, line: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise CohortError(f"{name} is not a number: {token!r}", line) from None


def parse_cohort(text: str | io.TextIOBase, schema: Schema | str = Schema.GROUPED) -> Cohort:
    """Parse cohort CSV text.

    The header must be ``time,event,group`` for grouped cohorts or
    ``time,event,marker`` for marker cohorts. Group tokens are ``low`` or
    ``high`` in any case. Row order is preserved.
    """
    schema = Schema(schema) if isinstance(schema, str) else schema
    if not isinstance(text, str):
        text = text.read()
    lines = text.splitlines()
    if not lines or not any(line.strip() for line in lines):
        raise CohortError("empty file")

    expected = ["time", "event", schema.value]
    header = [h.strip().lower() for h in next(csv.reader([lines[0]]))]
    if header != expected:
        raise CohortError(f"header must be {','.join(expected)!r}, got {lines[0]!r}", 1)

    records = []
    for lineno, row in enumerate(csv.reader(lines[1:]), start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 3:
            raise CohortError(f"expected 3 fields, got {len(row)}", lineno)
        time = _parse_real(row[0], "time", lineno)
        if not (math.isfinite(time) and time > 0):
            raise CohortError(f"non-positive or non-finite time {row[0].strip()!r}", lineno)
        event = _parse_event(row[1], lineno)
        if schema is Schema.GROUPED:
            token = row[2].strip().lower()
            try:
                group = Group(token)
            except ValueError:
                raise CohortError(f"unknown group {row[2].strip()!r}", lineno) from None
            records.append(SubjectRecord(time, event, group=group))
        else:
            marker = _parse_real(row[2], "marker", lineno)
            if not math.isfinite(marker):
                raise CohortError(f"non-finite marker {row[2].strip()!r}", lineno)
            records.append(SubjectRecord(time, event, marker=marker))

    if not records:
        raise CohortError("no data rows")
    return Cohort(tuple(records), schema)


def read_cohort(path, schema: Schema | str = Schema.GROUPED) -> Cohort:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_cohort(fh.read(), schema)


def format_cohort(cohort: Cohort) -> str:
    """Serialize to the CSV accepted by :func:`parse_cohort`.

    Reals are written with ``repr`` so parsing the output returns an equal
    cohort.
    """
    out = [f"time,event,{cohort.schema.value}"]
    for rec in cohort.records:
        last = rec.group.value if rec.group is not None else repr(rec.marker)
        out.append(f"{rec.time!r},{int(rec.event)},{last}")
    return "\n".join(out) + "\n"


def write_cohort(cohort: Cohort, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(format_cohort(cohort))


def dichotomize(cohort: Cohort, cutoff: float) -> Cohort:
    """Label markers above ``cutoff`` HIGH and the rest (ties included) LOW."""
    cohort._require(Schema.MARKER)
    records = tuple(
        SubjectRecord(rec.time, rec.event, group=Group.HIGH if rec.marker > cutoff else Group.LOW)
        for rec in cohort.records
    )
    return Cohort(records, Schema.GROUPED)


def grouped(records: Iterable[tuple[float, bool, Group | str]]) -> Cohort:
    """Convenience constructor from ``(time, event, group)`` triples."""
    recs = []
    for time, event, group in records:
        if isinstance(group, str):
            group = Group(group.lower())
        recs.append(SubjectRecord(float(time), bool(event), group=group))
    return Cohort(tuple(recs), Schema.GROUPED)


def relabel(cohort: Cohort) -> Cohort:
    """Swap HIGH and LOW labels."""
    cohort._require(Schema.GROUPED)
    swap = {Group.LOW: Group.HIGH, Group.HIGH: Group.LOW}
    return Cohort(tuple(replace(r, group=swap[r.group]) for r in cohort.records), Schema.GROUPED)
