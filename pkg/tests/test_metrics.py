"""Energy efficiency and outage counting, including the greedy/tail-sum
equivalence of the downlink procedure."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lifi_noma import (
    LinkOutage,
    OutageResult,
    QosRates,
    downlink_outage_mask,
    downlink_uop,
    energy_efficiency,
    uplink_outage_mask,
    uplink_uop,
)

GOLDEN_TOTAL = 0.008731757006398698
GOLDEN_EE = 458.0979517717648


def greedy_downlink_k_out(powers, cap) -> int:
    # shed the highest-power users until the remaining demand fits the cap
    remaining = sorted(float(p) for p in powers)
    shed = 0
    while remaining and sum(remaining) > cap:
        remaining.pop()
        shed += 1
    return shed


class TestEnergyEfficiency:
    def test_golden_point(self):
        rates = [QosRates(1.0, 1.0), QosRates(1.0, 1.0)]
        result = energy_efficiency(rates, GOLDEN_TOTAL)
        assert result.sum_rate == 4.0
        assert result.eta == pytest.approx(GOLDEN_EE, rel=1e-12)

    def test_zero_rate_zero_eta(self):
        result = energy_efficiency([QosRates(0.0, 0.0)], 1.0e-3)
        assert result.eta == 0.0

    def test_infinite_power_zero_eta(self):
        result = energy_efficiency([QosRates(1.0, 1.0)], math.inf)
        assert result.eta == 0.0

    @pytest.mark.parametrize("power", [0.0, -1.0])
    def test_rejects_non_positive_power(self, power):
        with pytest.raises(ValueError):
            energy_efficiency([QosRates(1.0, 1.0)], power)


class TestDownlinkOutage:
    def test_hand_example(self):
        # descending tails of [3, 1] are [4, 1]; only the first exceeds 3.5
        assert downlink_uop([3.0, 1.0], 3.5) == LinkOutage(1, 0.5)

    def test_cap_above_total_demand(self):
        assert downlink_uop([3.0, 1.0], 4.0).k_out == 0

    def test_cap_below_every_single_power(self):
        assert downlink_uop([3.0, 1.0], 0.5) == LinkOutage(2, 1.0)

    def test_empty_population(self):
        assert downlink_uop([], 1.0) == LinkOutage(0, 0.0)

    def test_infeasible_users_always_count(self):
        assert downlink_uop([math.inf, 1.0], 10.0) == LinkOutage(1, 0.5)
        assert downlink_uop([math.inf, 1.0], math.inf) == LinkOutage(1, 0.5)

    def test_uncapped_feasible_population(self):
        assert downlink_uop([3.0, 1.0], math.inf).k_out == 0

    @given(st.lists(st.floats(1e-6, 10.0), min_size=1, max_size=40),
           st.floats(1e-3, 50.0))
    @settings(max_examples=300)
    def test_tail_sum_matches_greedy_exclusion(self, powers, cap):
        assert downlink_uop(powers, cap).k_out == greedy_downlink_k_out(powers, cap)

    @given(st.lists(st.floats(1e-6, 10.0), min_size=1, max_size=40),
           st.floats(1e-3, 50.0), st.floats(1.0, 4.0))
    @settings(max_examples=200)
    def test_raising_the_cap_never_raises_outage(self, powers, cap, factor):
        assert downlink_uop(powers, cap * factor).uop <= downlink_uop(powers, cap).uop


class TestUplinkOutage:
    def test_split_population(self):
        cap = 2.0
        assert uplink_uop([2.0 * cap, cap / 2.0], cap) == LinkOutage(1, 0.5)

    def test_all_within_cap(self):
        assert uplink_uop([0.5, 1.0, 1.5], 1.5).k_out == 0

    def test_boundary_power_is_served(self):
        # the comparison is strict: exactly-at-cap users stay in service
        assert uplink_uop([2.0], 2.0).k_out == 0

    def test_infeasible_users_always_count(self):
        assert uplink_uop([math.inf], math.inf) == LinkOutage(1, 1.0)

    @given(st.lists(st.floats(1e-6, 10.0), min_size=1, max_size=40),
           st.floats(1e-3, 50.0), st.floats(1.0, 4.0))
    @settings(max_examples=200)
    def test_raising_the_cap_never_raises_outage(self, powers, cap, factor):
        assert uplink_uop(powers, cap * factor).uop <= uplink_uop(powers, cap).uop


class TestOutageMasks:
    @given(st.lists(st.floats(1e-6, 10.0), min_size=1, max_size=30),
           st.floats(1e-3, 40.0))
    @settings(max_examples=200)
    def test_downlink_mask_agrees_with_count(self, powers, cap):
        mask = downlink_outage_mask(powers, cap)
        assert int(mask.sum()) == downlink_uop(powers, cap).k_out
        # the shed users are exactly the heaviest ones
        if mask.any() and not mask.all():
            values = np.asarray(powers)
            assert values[mask].min() >= values[~mask].max()

    def test_downlink_mask_picks_heaviest(self):
        mask = downlink_outage_mask([1.0, 5.0, 2.0], 3.5)
        assert list(mask) == [False, True, False]

    def test_uplink_mask(self):
        mask = uplink_outage_mask([0.5, 3.0, math.inf], 2.0)
        assert list(mask) == [False, True, True]


class TestOutageResult:
    def test_from_links(self):
        result = OutageResult.from_links(LinkOutage(1, 0.25), LinkOutage(2, 0.5))
        assert result.k_out_dl == 1
        assert result.uop_dl == 0.25
        assert result.k_out_ul == 2
        assert result.uop_ul == 0.5
