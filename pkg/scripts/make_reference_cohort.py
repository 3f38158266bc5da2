"""Regenerate src/progsep/data/reference_cohort.csv.

An 800-subject uncensored cohort whose 5-year contingency table is exactly
a=143, b=257, c=82, d=318. Failure times are exponential with the default
group rates, drawn conditionally on the side of the 5-year horizon each
subject must fall on.
"""

import math
from pathlib import Path

from progsep.cohort import Cohort, Group, Schema, SubjectRecord, write_cohort
from progsep.simulation import DEFAULT_RATE_HIGH, DEFAULT_RATE_LOW, SplitMix64

HORIZON = 5.0
SEED = 20160101
# (group, rate, failures by horizon, survivors past horizon)
LAYOUT = [
    (Group.LOW, DEFAULT_RATE_LOW, 257, 143),
    (Group.HIGH, DEFAULT_RATE_HIGH, 318, 82),
]


def main():
    rng = SplitMix64(SEED)
    records = []
    for group, rate, failed, survived in LAYOUT:
        p_fail = -math.expm1(-rate * HORIZON)
        for _ in range(failed):
            t = 0.0
            while not 0 < t <= HORIZON:
                t = -math.log1p(-rng.uniform() * p_fail) / rate
            records.append(SubjectRecord(t, True, group=group))
        for _ in range(survived):
            t = HORIZON - math.log1p(-rng.uniform()) / rate
            if t == HORIZON:
                t = math.nextafter(HORIZON, math.inf)
            records.append(SubjectRecord(t, True, group=group))
    out = Path(__file__).resolve().parents[1] / "src" / "progsep" / "data" / "reference_cohort.csv"
    write_cohort(Cohort(tuple(records), Schema.GROUPED), out)
    print(f"wrote {len(records)} records to {out}")


if __name__ == "__main__":
    main()
