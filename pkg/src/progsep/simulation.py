"""Seeded simulation of two exponential risk groups with optional random censoring.

All randomness comes from :class:`SplitMix64` so a cohort is a pure function of
its configuration and seed, reproducible bit-for-bit on any platform or in any
language implementing the same three primitives:

* ``next_u64``: SplitMix64 (Steele, Lea & Flood 2014), increment
  ``0x9E3779B97F4A7C15``, finaliser multipliers ``0xBF58476D1CE4E5B9`` and
  ``0x94D049BB133111EB`` with shifts 30, 27, 31.
* ``uniform``: ``(next_u64() >> 11) * 2**-53``, uniform on [0, 1).
* ``below(n)``: ``x % n`` for the first ``x = next_u64()`` with
  ``x < 2**64 - (2**64 % n)``.

Reference vector: seed 0 gives ``0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4,
0x06C45D188009454F``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .cohort import Cohort, CohortError, Group, Schema, SubjectRecord

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

DEFAULT_RATE_LOW = 0.2057
DEFAULT_RATE_HIGH = 0.3169


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        if not 0 <= seed <= _MASK:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
        self.state = seed

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53

    def below(self, n: int) -> int:
        if n < 1:
            raise ValueError("upper bound must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def split(self) -> "SplitMix64":
        """Independent child generator seeded from the next output."""
        return SplitMix64(self.next_u64())


@dataclass(frozen=True)
class SimulationConfig:
    n_low: int = 400
    n_high: int = 400
    rate_low: float = DEFAULT_RATE_LOW
    rate_high: float = DEFAULT_RATE_HIGH
    censor_fraction: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n_low < 1 or self.n_high < 1:
            raise ValueError("each group needs at least one subject")
        if not (0 < self.rate_low <= self.rate_high and math.isfinite(self.rate_high)):
            raise ValueError(
                f"rates must satisfy 0 < rate_low <= rate_high, got {self.rate_low}, {self.rate_high}"
            )
        if not 0 <= self.censor_fraction < 1:
            raise ValueError(f"censor fraction must lie in [0, 1), got {self.censor_fraction}")
        if not 0 <= self.seed <= _MASK:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


def exponential(rng: SplitMix64, rate: float) -> float:
    # inverse CDF; u == 0 would give a zero time, which is not a valid record
    while True:
        t = -math.log1p(-rng.uniform()) / rate
        if t > 0:
            return t


def simulate_cohort(config: SimulationConfig) -> Cohort:
    """Draw LOW then HIGH failure times; censor ``config.censor_fraction`` of each group.

    Censoring uses a child generator split off after all failure times are
    drawn, so the uncensored times are identical with and without censoring.
    """
    rng = SplitMix64(config.seed)
    records = [
        SubjectRecord(exponential(rng, rate), True, group=group)
        for group, n, rate in (
            (Group.LOW, config.n_low, config.rate_low),
            (Group.HIGH, config.n_high, config.rate_high),
        )
        for _ in range(n)
    ]
    cohort = Cohort(tuple(records), Schema.GROUPED)
    censor_seed = rng.next_u64()
    if config.censor_fraction > 0:
        cohort = apply_censoring(cohort, config.censor_fraction, censor_seed)
    return cohort


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def apply_censoring(cohort: Cohort, fraction: float, seed: int) -> Cohort:
    """Censor ``round(fraction * n_g)`` randomly chosen subjects of each group.

    A censored subject's time becomes a uniform draw on (0, failure time).
    Groups are processed LOW then HIGH; within a group, subjects are chosen by
    a partial Fisher-Yates shuffle of their positions and new times are drawn
    in cohort order.
    """
    if not 0 <= fraction < 1:
        raise ValueError(f"censor fraction must lie in [0, 1), got {fraction}")
    if cohort.schema is not Schema.GROUPED:
        raise CohortError("censoring needs a grouped cohort")
    if cohort.censored:
        raise CohortError("cohort already contains censored records")

    rng = SplitMix64(seed)
    records = list(cohort.records)
    for group in (Group.LOW, Group.HIGH):
        positions = [i for i, r in enumerate(records) if r.group is group]
        k = _round_half_up(fraction * len(positions))
        for j in range(k):
            swap = j + rng.below(len(positions) - j)
            positions[j], positions[swap] = positions[swap], positions[j]
        for i in sorted(positions[:k]):
            rec = records[i]
            while True:
                t = rng.uniform() * rec.time
                if 0 < t < rec.time:
                    break
            records[i] = replace(rec, time=t, event=False)
    return Cohort(tuple(records), Schema.GROUPED)
