"""Metric identities and definitions."""

import pytest

from holesim.energy import ChargeCategory, EnergyLedger
from holesim.metrics import (
    avg_energy,
    hole_coverage_lifetime,
    load_balance,
    network_lifetime,
    recovery_time,
)
from holesim.protocol import HoleRecord, RecoveryKind


def ledger(consumed, initial=10.0):
    led = EnergyLedger(initial)
    led.charge(ChargeCategory.TX, consumed)
    return led


def record(detected, covered=None, reopened=None, cells=1):
    rec = HoleRecord(hole_id=0, detecting_node=0,
                     cells=frozenset({(i, 0) for i in range(cells)}),
                     detected_at=detected)
    if covered is not None:
        rec.covered_at = covered
        rec.covered_by = RecoveryKind.RANGE_INCREASE
    else:
        rec.covered_by = RecoveryKind.UNRECOVERED
    rec.reopened_at = reopened
    return rec


class TestAvgEnergy:
    def test_untouched(self):
        assert avg_energy([EnergyLedger(4.0), EnergyLedger(4.0)]) == 0.0

    def test_mean(self):
        assert avg_energy([ledger(1.0), ledger(3.0)]) == pytest.approx(2.0)

    def test_matches_conservation_identity(self):
        leds = [ledger(1.5), ledger(2.5), ledger(0.25)]
        expected = sum(l.initial - l.residual for l in leds) / 3
        assert avg_energy(leds) == pytest.approx(expected, rel=1e-12)

    def test_zero_nodes_undefined(self):
        with pytest.raises(ValueError):
            avg_energy([])


class TestLoadBalance:
    def test_equal_consumption_is_one(self):
        assert load_balance([ledger(2.0)] * 4 + [ledger(2.0)]) == pytest.approx(1.0)

    def test_single_consumer_is_one_over_n(self):
        leds = [ledger(5.0), ledger(0.0), ledger(0.0), ledger(0.0)]
        assert load_balance(leds) == pytest.approx(0.25)

    def test_hand_computed_value(self):
        leds = [ledger(1.0), ledger(2.0), ledger(3.0)]
        assert load_balance(leds) == pytest.approx(36.0 / (3 * 14.0))

    def test_scale_invariance(self):
        a = [ledger(0.1), ledger(0.4), ledger(0.9)]
        b = [ledger(0.5), ledger(2.0), ledger(4.5)]
        assert load_balance(a) == pytest.approx(load_balance(b), rel=1e-12)

    def test_all_zero_is_perfect_by_convention(self):
        assert load_balance([EnergyLedger(4.0)] * 3) == 1.0


class TestHoleCoverageLifetime:
    def test_single_hole_window(self):
        recs = [record(detected=50.0, covered=100.0)]
        assert hole_coverage_lifetime(recs, 1000.0) == pytest.approx(900.0)

    def test_reopen_closes_window(self):
        recs = [record(detected=50.0, covered=100.0, reopened=400.0)]
        assert hole_coverage_lifetime(recs, 1000.0) == pytest.approx(300.0)

    def test_no_holes_absent(self):
        assert hole_coverage_lifetime([], 1000.0) is None

    def test_unrecovered_zero_numerator(self):
        recs = [record(detected=50.0, covered=100.0), record(detected=60.0)]
        assert hole_coverage_lifetime(recs, 1000.0) == pytest.approx(450.0)


class TestRecoveryTime:
    def test_single(self):
        assert recovery_time([record(50.0, covered=53.0)]) == pytest.approx(3.0)

    def test_mean(self):
        recs = [record(10.0, covered=12.0), record(20.0, covered=24.0)]
        assert recovery_time(recs) == pytest.approx(3.0)

    def test_none_recovered(self):
        assert recovery_time([record(10.0)]) is None


class TestNetworkLifetime:
    def test_first_death(self):
        assert network_lifetime(123.0, 1000.0) == 123.0

    def test_no_death_runs_full_duration(self):
        assert network_lifetime(None, 1000.0) == 1000.0
