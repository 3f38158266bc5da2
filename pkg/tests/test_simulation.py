import math

import pytest

from progsep.cohort import Group, format_cohort
from progsep.simulation import SimulationConfig, SplitMix64, apply_censoring, simulate_cohort
from progsep.survival import km_estimate, survival_at


def test_splitmix_reference_vectors():
    rng = SplitMix64(0)
    assert [rng.next_u64() for _ in range(3)] == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]
    rng = SplitMix64(1234567)
    assert [rng.next_u64() for _ in range(5)] == [
        6457827717110365317,
        3203168211198807973,
        9817491932198370423,
        4593380528125082431,
        16408922859458223821,
    ]


def test_uniform_and_below():
    rng = SplitMix64(42)
    us = [rng.uniform() for _ in range(10_000)]
    assert all(0 <= u < 1 for u in us)
    assert abs(sum(us) / len(us) - 0.5) < 0.01
    counts = [0] * 7
    for _ in range(7000):
        counts[rng.below(7)] += 1
    assert all(850 < c < 1150 for c in counts)


def test_split_is_deterministic():
    a, b = SplitMix64(9), SplitMix64(9)
    assert a.split().next_u64() == b.split().next_u64()


@pytest.mark.parametrize(
    "kwargs",
    [dict(n_low=0), dict(rate_low=0), dict(rate_low=0.5, rate_high=0.4), dict(censor_fraction=1.0), dict(seed=-1), dict(seed=2**64)],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        SimulationConfig(**kwargs)


def test_uncensored_by_default():
    cohort = simulate_cohort(SimulationConfig(seed=3))
    assert len(cohort) == 800
    assert all(r.event for r in cohort)
    assert len(cohort.group(Group.LOW)) == len(cohort.group(Group.HIGH)) == 400


def test_same_seed_identical():
    a = simulate_cohort(SimulationConfig(seed=7, censor_fraction=0.3))
    b = simulate_cohort(SimulationConfig(seed=7, censor_fraction=0.3))
    assert format_cohort(a) == format_cohort(b)
    assert format_cohort(a) != format_cohort(simulate_cohort(SimulationConfig(seed=8, censor_fraction=0.3)))


def test_censoring_keeps_failure_draws():
    plain = simulate_cohort(SimulationConfig(seed=11))
    cens = simulate_cohort(SimulationConfig(seed=11, censor_fraction=0.3))
    for p, c in zip(plain, cens):
        assert c.time == p.time if c.event else c.time < p.time


def test_censoring_counts_and_times():
    base = simulate_cohort(SimulationConfig(seed=5))
    out = apply_censoring(base, 0.3, seed=99)
    for group in Group:
        assert sum(not r.event for r in out.group(group)) == 120
    for old, new in zip(base, out):
        assert old.group is new.group
        if new.event:
            assert new.time == old.time
        else:
            assert 0 < new.time < old.time


def test_censoring_rounds_per_group():
    base = simulate_cohort(SimulationConfig(n_low=5, n_high=7, seed=1))
    out = apply_censoring(base, 0.3, seed=2)
    # round(1.5) = 2 and round(2.1) = 2
    assert sum(not r.event for r in out.group(Group.LOW)) == 2
    assert sum(not r.event for r in out.group(Group.HIGH)) == 2


def test_censoring_zero_is_identity():
    base = simulate_cohort(SimulationConfig(seed=5))
    assert apply_censoring(base, 0.0, seed=1) == base


def test_censoring_rejects_censored_input():
    cens = simulate_cohort(SimulationConfig(seed=5, censor_fraction=0.1))
    with pytest.raises(ValueError):
        apply_censoring(cens, 0.3, seed=1)


def test_five_year_fractions_across_seeds():
    hits = 0
    for seed in range(1000):
        cohort = simulate_cohort(SimulationConfig(seed=seed))
        low = sum(r.time > 5 for r in cohort.group(Group.LOW)) / 400
        high = sum(r.time > 5 for r in cohort.group(Group.HIGH)) / 400
        hits += abs(low - 0.3575) <= 0.06 and abs(high - 0.205) <= 0.06
    assert hits >= 950


def test_exponential_survival_converges():
    n = 100_000
    config = SimulationConfig(n_low=n, n_high=n, seed=2024)
    cohort = simulate_cohort(config)
    for group, rate in ((Group.LOW, config.rate_low), (Group.HIGH, config.rate_high)):
        s = math.exp(-5 * rate)
        se = math.sqrt(s * (1 - s) / n)
        got = survival_at(km_estimate(cohort.group(group)), 5)
        assert abs(got - s) < 3 * se
