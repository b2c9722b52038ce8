"""Tests for homogeneity audits, identity checks and the classical and FD oracles."""

import math

import numpy as np
import pytest

from finsler_lab.config import settings
from finsler_lab.errors import ModelNotLorentzian, StencilLeavesDomain
from finsler_lab.jets import ChartPoint, MultiIndex, TruncationOrder
from finsler_lab.verify import (
    CheckReport,
    ClassicalGeometry,
    contact_and_divergence_checks,
    default_suite,
    euler_suite,
    fd_oracle_compare,
    fd_partials,
    homogeneity_check,
    identity_suite,
    lorentzian_reduction,
    sample_points,
)

FRW_POINT = ChartPoint.of((1.5, 0.2, -0.1, 0.3), (1.0, 0.1, 0.0, 0.2))


class TestHomogeneity:
    def test_jet_selector(self, randers, randers_point):
        report = homogeneity_check(
            lambda pt: randers.lagrangian_jet(pt, TruncationOrder(0, 1)), 2, [randers_point]
        )
        assert report.name == "homogeneity (degree 2)"
        assert report.passed

    def test_value_selector(self, randers, randers_point):
        def L(pt):
            return randers.lagrangian_value(pt.x_array, pt.v_array)

        assert homogeneity_check(L, 2, [randers_point], name="L").passed
        assert not homogeneity_check(L, 1, [randers_point], name="L").passed

    def test_euler_suite_covers_the_bundle(self, bogoslovsky):
        pt = ChartPoint.of((0.1, 0.0, 0.0, 0.0), (1.0, 0.2, 0.1, -0.1))
        reports = euler_suite(bogoslovsky, [pt], order=TruncationOrder(2, 5))
        failed = [r.name for r in reports if not r.passed]
        assert failed == []
        assert any(r.name == "R0 (degree 0)" for r in reports)


class TestIdentities:
    def test_randers_identities(self, randers, randers_point):
        reports = identity_suite(randers, [randers_point])
        assert len(reports) == 8
        assert all(r.passed for r in reports), [r.as_dict() for r in reports]

    def test_contact_and_divergence(self, randers, randers_point):
        reports = contact_and_divergence_checks(randers, [randers_point])
        assert len(reports) == 5
        assert all(r.passed for r in reports), [r.as_dict() for r in reports]


class TestClassical:
    def test_schwarzschild_christoffels(self, schwarzschild):
        M, r = 1.0, 10.0
        c = ClassicalGeometry.at(schwarzschild.base_metric, np.array([0.0, r, 1.2, 0.0]))
        assert c.christoffels[1, 0, 0] == pytest.approx(M * (r - 2 * M) / r**3)
        assert c.christoffels[0, 0, 1] == pytest.approx(M / (r * (r - 2 * M)))
        np.testing.assert_allclose(c.ricci, 0.0, atol=1e-12)

    def test_frw_ricci_scalar(self, frw):
        t = 1.5
        c = ClassicalGeometry.at(frw.base_metric, np.array([t, 0.0, 0.0, 0.0]))
        assert c.ricci_scalar == pytest.approx(-6.0 / t**2)

    def test_riemann_antisymmetric(self, frw):
        c = ClassicalGeometry.at(frw.base_metric, np.array([1.5, 0.0, 0.0, 0.0]))
        np.testing.assert_allclose(c.riemann, -c.riemann.transpose(0, 1, 3, 2), atol=1e-12)


class TestLorentzianReduction:
    def test_frw(self, frw):
        report = lorentzian_reduction(frw, [FRW_POINT])
        assert report.passed, report.details
        assert set(report.details) == {"ricci_contraction", "connection", "curvature", "R0"}
        assert report.samples == 1

    def test_schwarzschild(self, schwarzschild, schwarzschild_point):
        assert lorentzian_reduction(schwarzschild, [schwarzschild_point]).passed

    def test_curvature_matches_riemann(self, schwarzschild):
        pt = ChartPoint.of((0.0, 7.0, 1.1, 0.0), (1.3, 0.2, 0.01, 0.03))
        report = lorentzian_reduction(schwarzschild, [pt])
        assert report.details["curvature"] < 1e-10

    def test_classical_curvature_contracts_riemann(self, frw):
        c = ClassicalGeometry.at(frw.base_metric, np.array([1.5, 0.0, 0.0, 0.0]))
        v = np.array([1.0, 0.1, 0.0, 0.2])
        R = c.curvature(v)
        np.testing.assert_allclose(R, -R.swapaxes(1, 2), atol=1e-12)
        np.testing.assert_allclose(np.einsum("iik,k->", R, v), -c.ricci_form(v), atol=1e-12)

    def test_finsler_model_rejected(self, randers, randers_point):
        with pytest.raises(ModelNotLorentzian, match="no Lorentzian metric"):
            lorentzian_reduction(randers, [randers_point])


class TestFiniteDifferenceOracle:
    def test_minkowski_partials(self, minkowski):
        pt = ChartPoint.of((0.0, 0.0, 0.0, 0.0), (1.0, 0.3, 0.0, 0.0))
        partials = fd_partials(minkowski, pt, max_order=2)
        assert partials[MultiIndex((0, 0, 0, 0), (2, 0, 0, 0))] == pytest.approx(2.0, abs=1e-8)
        assert partials[MultiIndex((0, 0, 0, 0), (0, 1, 0, 0))] == pytest.approx(-0.6, abs=1e-8)
        assert partials[MultiIndex((1, 0, 0, 0), (0, 0, 0, 0))] == pytest.approx(0.0, abs=1e-8)

    def test_minkowski_agrees(self, minkowski):
        pt = ChartPoint.of((0.0, 0.0, 0.0, 0.0), (1.0, 0.3, 0.0, 0.0))
        report = fd_oracle_compare(minkowski, pt)
        assert report.passed
        assert report.name == "fd_oracle (lorentzian)"
        assert set(report.details) == {f"order_{k}" for k in range(5)}

    def test_randers_agrees(self, randers, randers_point):
        report = fd_oracle_compare(randers, randers_point, max_order=3)
        assert report.passed, report.details

    def test_stencil_near_horizon(self, schwarzschild):
        pt = ChartPoint.of((0.0, 2.01, 1.2, 0.0), (1.0, 0.0, 0.0, 0.0))
        with pytest.raises(StencilLeavesDomain, match="leaves the smoothness domain"):
            fd_partials(schwarzschild, pt, max_order=2, h=0.1)


class TestReport:
    def test_of_scalar_and_array(self):
        report = CheckReport.of("x", [0.1, np.array([-0.3, 0.2])], 0.5)
        assert report.max_abs_residual == pytest.approx(0.3)
        assert report.samples == 2
        assert report.passed

    def test_nan_fails(self):
        report = CheckReport.of("x", [np.array([0.0, math.nan])], 1.0)
        assert math.isnan(report.max_abs_residual)
        assert not report.passed

    def test_merge(self):
        a = CheckReport("c", 1e-10, 1e-8, 3, {"k": 1.0})
        b = CheckReport("c", 1e-9, 1e-8, 2, {"k": 0.5, "j": 2.0})
        merged = CheckReport.merge([a, b])
        assert merged.max_abs_residual == 1e-9
        assert merged.samples == 5
        assert merged.details == {"k": 1.0, "j": 2.0}

    def test_merge_propagates_nan(self):
        a = CheckReport("c", math.nan, 1e-8, 1)
        b = CheckReport("c", 1e-12, 1e-8, 1)
        assert math.isnan(CheckReport.merge([b, a]).max_abs_residual)

    def test_merge_nothing(self):
        with pytest.raises(ValueError, match="Nothing to merge"):
            CheckReport.merge([])

    def test_as_dict_sorts_details(self):
        d = CheckReport("c", 0.0, 1.0, 1, {"z": 1.0, "a": 2.0}).as_dict()
        assert list(d["details"]) == ["a", "z"]
        assert d["passed"] is True


class TestSuite:
    def test_sampling_is_seeded(self, randers):
        a = sample_points(randers, 3, seed=7)
        b = sample_points(randers, 3, seed=7)
        assert a == b
        assert len(a) == 3

    def test_minkowski_suite(self, minkowski, monkeypatch):
        monkeypatch.setattr(settings, "max_x_order", 2)
        one = default_suite(minkowski, n_points=2, seed=3, threads=1)
        failed = [r.name for r in one if not r.passed]
        assert failed == []
        assert one[-1].name == "fd_oracle (lorentzian)"
        assert all(r.details["seed"] == 3.0 for r in one)

        many = default_suite(minkowski, n_points=2, seed=3, threads=2)
        assert [r.as_dict() for r in many] == [r.as_dict() for r in one]
