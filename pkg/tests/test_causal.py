"""Tests for admissibility, timelike cones and observer normalization."""

import numpy as np
import pytest

from finsler_lab.catalog import build_model
from finsler_lab.causal import (
    LORENTZIAN_SIGNATURE,
    Region,
    admissibility_report,
    convexity_probe,
    normalize_observer,
    sample_timelike,
    signature_of,
    timelike_membership,
    timelike_region_mask,
)
from finsler_lab.errors import NotTimelike, SeedNotTimelike
from finsler_lab.jets import ChartPoint

ORIGIN = (0.0, 0.0, 0.0, 0.0)


class TestAdmissibility:
    @pytest.mark.parametrize(
        ("v", "region"),
        [
            ((1.0, 0.0, 0.0, 0.0), Region.timelike),
            ((0.0, 1.0, 0.0, 0.0), Region.spacelike_signed),
            ((1.0, 1.0, 0.0, 0.0), Region.null_adjacent),
        ],
    )
    def test_minkowski_regions(self, minkowski, v, region):
        report = admissibility_report(minkowski, ChartPoint.of(ORIGIN, v))
        assert report.region is region

    def test_timelike_report_fields(self, minkowski):
        report = admissibility_report(minkowski, ChartPoint.of(ORIGIN, (2.0, 0.0, 0.0, 0.0)))
        assert report.L_value == pytest.approx(4.0)
        assert report.det_g == pytest.approx(-1.0)
        assert report.signature == LORENTZIAN_SIGNATURE
        assert report.is_admissible

    def test_randers_null_root_is_null_adjacent(self, randers):
        report = admissibility_report(randers, ChartPoint.of(ORIGIN, (1.0, 1.0, 0.0, 0.0)))
        assert report.region is Region.null_adjacent
        assert not report.is_admissible

    def test_outside_chart_is_inadmissible(self, schwarzschild):
        report = admissibility_report(
            schwarzschild, ChartPoint.of((0.0, 1.0, 1.2, 0.0), (1.0, 0.0, 0.0, 0.0))
        )
        assert report.region is Region.inadmissible
        assert np.isnan(report.L_value)


class TestSignature:
    def test_minkowski(self):
        assert signature_of(np.diag([1.0, -1.0, -1.0, -1.0])) == (1, -1, -1, -1)

    def test_sorted_largest_first(self):
        assert signature_of(np.diag([-2.0, 3.0, -1.0, 0.5])) == (1, 1, -1, -1)


class TestRegionMask:
    def test_mask_per_row(self, minkowski):
        V = np.array(
            [
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 0.0],
                [-1.0, 0.2, 0.0, 0.0],
            ]
        )
        mask = timelike_region_mask(minkowski, np.zeros(4), V)
        assert mask.tolist() == [True, False, False, True]

    def test_bad_rows_are_isolated(self, randers):
        V = np.array([[1.0, 0.0, 0.0, 0.0], [1.0, 1.0, 0.0, 0.0], [2.0, 0.5, 0.0, 0.0]])
        mask = timelike_region_mask(randers, np.zeros(4), V)
        assert mask.tolist() == [True, False, True]


class TestMembership:
    def test_future_direction(self, minkowski):
        assert timelike_membership(minkowski, np.zeros(4), np.array([1.0, 0.5, 0.0, 0.0]))

    def test_ray_invariant(self, randers):
        v = np.array([1.0, 0.3, -0.2, 0.1])
        x = np.zeros(4)
        assert timelike_membership(randers, x, v) == timelike_membership(randers, x, 7.0 * v)

    def test_past_direction(self, minkowski):
        assert not timelike_membership(minkowski, np.zeros(4), np.array([-1.0, 0.0, 0.0, 0.0]))

    def test_spacelike_direction(self, minkowski):
        assert not timelike_membership(minkowski, np.zeros(4), np.array([0.1, 1.0, 0.0, 0.0]))

    def test_seed_must_be_timelike(self, minkowski):
        with pytest.raises(SeedNotTimelike, match="not timelike"):
            timelike_membership(
                minkowski,
                np.zeros(4),
                np.array([1.0, 0.0, 0.0, 0.0]),
                seed=np.array([0.0, 1.0, 0.0, 0.0]),
            )


class TestObservers:
    def test_normalize_randers(self, randers):
        u = normalize_observer(randers, np.zeros(4), np.array([1.0, 0.0, 0.0, 0.0]))
        np.testing.assert_allclose(u, [1.0 / 1.3, 0.0, 0.0, 0.0])
        assert randers.lagrangian_value(np.zeros(4), u) == pytest.approx(1.0)

    def test_normalize_bogoslovsky(self, bogoslovsky):
        u = normalize_observer(bogoslovsky, np.zeros(4), np.array([3.0, 0.5, 0.1, 0.0]))
        assert bogoslovsky.lagrangian_value(np.zeros(4), u) == pytest.approx(1.0, abs=1e-12)

    def test_normalize_rejects_spacelike(self, minkowski):
        with pytest.raises(NotTimelike, match="spacelike-signed"):
            normalize_observer(minkowski, np.zeros(4), np.array([0.0, 1.0, 0.0, 0.0]))

    def test_sample_timelike_is_unit(self, randers, rng):
        x = np.array([0.2, 0.0, -0.1, 0.3])
        samples = sample_timelike(randers, x, 12, rng)
        assert samples.shape == (12, 4)
        np.testing.assert_allclose(randers.lagrangian_values(x, samples), 1.0, rtol=1e-10)

    def test_sample_needs_timelike_seed(self, rng):
        model = build_model({"kind": "lorentzian", "seed": [0.0, 1.0, 0.0, 0.0]}, n_samples=1)
        with pytest.raises(SeedNotTimelike):
            sample_timelike(model, np.zeros(4), 4, rng)


class TestConvexity:
    def test_minkowski_cone_is_convex(self, minkowski, rng):
        probe = convexity_probe(minkowski, np.zeros(4), 10, rng)
        assert probe.passed
        assert probe.samples == 10
