import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings

from affdyn.dynamics import AffineAutomorphism
from affdyn.heights import weil_height
from affdyn.inequality import (
    BoxSampler,
    CompositeSampler,
    OrbitSampler,
    RandomRationalSampler,
    RationalBoxSampler,
    batch_verify,
    delta_statistic,
    silverman_statistic,
)

from conftest import small_points

LOG2 = math.log(2)


class TestDeltaStatistic:
    def test_origin(self, henon):
        assert delta_statistic(henon, (0, 0, 0)) == 0.0

    def test_unit_point(self, henon):
        # images (1,2,2) and (1,1,0): heights log 2 and 0; h(P) = 0
        assert delta_statistic(henon, (1, 1, 1)) == pytest.approx(LOG2 / 2, abs=0)

    def test_orbit_point_against_direct_formula(self, henon):
        # f(2,6,5) = (6,41,27), f^{-1}(2,6,5) = (1,2,2)
        expected = math.log(41) / 2 + LOG2 / 4 - (1 + Fraction(1, 8)) * math.log(6)
        assert delta_statistic(henon, (2, 6, 5)) == pytest.approx(expected, rel=1e-15)

    @given(small_points)
    @settings(max_examples=50)
    def test_representation_independent(self, henon, point):
        # unreduced coordinate representations give the same statistic
        doubled = tuple(Fraction(2 * c.numerator, 2 * c.denominator) for c in
                        (Fraction(x) for x in point))
        assert delta_statistic(henon, doubled) == delta_statistic(henon, point)


class TestSilvermanStatistic:
    def test_unit_point(self, henon):
        value = silverman_statistic(henon.homogenized_pair(), (1, 1, 1))
        assert value == pytest.approx(LOG2 / 2, abs=0)

    def test_zero_height_cycle(self, henon):
        # (0,0,0) maps to height-0 points under both extensions
        assert silverman_statistic(henon.homogenized_pair(), (0, 0, 0)) == 0.0

    def test_identity_family(self):
        ident = AffineAutomorphism.identity(3)
        phi, _ = ident.homogenized_pair()
        assert silverman_statistic([phi], (3, Fraction(1, 2), -4)) == 0.0

    @given(small_points)
    @settings(max_examples=50)
    def test_exceeds_delta_by_exact_margin(self, henon, point):
        d, d_inv = henon.degrees
        margin = weil_height(point) / (d * d_inv)
        silverman = silverman_statistic(henon.homogenized_pair(), point)
        delta = delta_statistic(henon, point)
        assert silverman == pytest.approx(delta + margin, abs=1e-12)
        assert silverman >= delta - margin - 1e-12


class TestSamplers:
    def test_box_enumeration_is_nested_and_exhaustive(self):
        small = list(BoxSampler(1).points(2))
        bigger = list(BoxSampler(2).points(2))
        assert bigger[: len(small)] == small
        assert len(small) == 9 and len(bigger) == 25

    def test_rational_box_counts(self):
        values = {p for p in RationalBoxSampler(2, 2).points(1)}
        # q=1: -2..2 (5 values); q=2: +-1/2 and +-3/2... |num|<=2 -> +-1/2 only
        assert len(values) == 7

    def test_random_sampler_deterministic(self):
        a = list(RandomRationalSampler(20, seed=5).points(3))
        b = list(RandomRationalSampler(20, seed=5).points(3))
        assert a == b


class TestBatchVerify:
    def test_single_fixed_point(self, henon):
        report = batch_verify(henon, OrbitSampler(((Fraction(0),) * 3,), 0), assume_regular=True)
        assert report.min_delta == 0.0
        assert report.argmin == (0, 0, 0)
        assert report.stabilized  # flagged as below warmup
        assert "below warmup" in report.stabilization_note

    def test_small_box(self, henon):
        report = batch_verify(henon, BoxSampler(3), assume_regular=True)
        assert len(report.records) == 7**3
        assert math.isfinite(report.min_delta)
        assert report.argmin is not None
        # the reported minimum is recomputable from the stored heights
        worst = min(report.records, key=lambda r: r.delta)
        d, d_inv = henon.degrees
        recomputed = (
            worst.h_forward / d
            + worst.h_inverse / d_inv
            - (1 + 1 / (d * d_inv)) * worst.h_point
        )
        assert recomputed == report.min_delta

    def test_orbit_points_stay_above_box_minimum(self, henon):
        box = batch_verify(henon, BoxSampler(3), assume_regular=True)
        seeds = (tuple(map(Fraction, (1, 1, 1))),)
        orbit = batch_verify(henon, OrbitSampler(seeds, 8), assume_regular=True)
        assert all(r.delta >= box.min_delta for r in orbit.records)

    def test_composite_sampler_and_regularity_recorded(self, henon):
        sampler = CompositeSampler((BoxSampler(1), OrbitSampler(((Fraction(1),) * 3,), 3)))
        report = batch_verify(henon, sampler)
        assert report.regularity == "regular"
        assert len(report.records) == 27 + 4
        asserted = batch_verify(henon, sampler, assume_regular=True)
        assert asserted.regularity == "asserted"

    def test_bit_budget_skips_are_counted(self, henon):
        seeds = (tuple(map(Fraction, (1, 1, 1))),)
        report = batch_verify(
            henon, OrbitSampler(seeds, 12), assume_regular=True, bit_budget=48
        )
        assert report.skipped > 0

    def test_silverman_mode(self, henon):
        report = batch_verify(henon, BoxSampler(1), assume_regular=True, mode="silverman")
        assert report.mode == "silverman"
        d, d_inv = henon.degrees
        for record in report.records:
            expected = record.h_forward / d + record.h_inverse / d_inv - record.h_point
            assert record.delta == expected

    def test_json_report_is_deterministic(self, henon):
        sampler = BoxSampler(2)
        a = json.dumps(batch_verify(henon, sampler, assume_regular=True).to_json_dict(), sort_keys=True)
        b = json.dumps(batch_verify(henon, sampler, assume_regular=True).to_json_dict(), sort_keys=True)
        assert a == b

    def test_stabilization_checkpoints(self, henon):
        report = batch_verify(henon, BoxSampler(5), assume_regular=True, warmup=32)
        counts = [c for c, _ in report.checkpoints]
        assert counts[0] == 32 and counts[-1] == len(report.records)
        mins = [m for _, m in report.checkpoints]
        assert all(b <= a for a, b in zip(mins, mins[1:]))  # running minima
        assert report.stabilized

    def test_unstable_minimum_fails_verdict(self, henon):
        # the minimum still drops by ~0.026 after the checkpoint at 60 points,
        # so a 0.02 slack must report failure
        report = batch_verify(
            henon, BoxSampler(2), assume_regular=True, warmup=60, slack=0.02
        )
        assert not report.stabilized
        relaxed = batch_verify(
            henon, BoxSampler(2), assume_regular=True, warmup=60, slack=0.05
        )
        assert relaxed.stabilized
