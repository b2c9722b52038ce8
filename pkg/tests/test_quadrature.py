"""Tests for observer-fiber charts, weights and Gauss rules."""

import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.integrate import quad

from finsler_lab.catalog import build_model
from finsler_lab.errors import ConeExit, NonHomogeneousIntegrand, SeedNotTimelike
from finsler_lab.quadrature import (
    FiberChartKind,
    FiberFrame,
    QuadratureConfig,
    build_fiber_quadrature,
    fiber_weight,
    integrate_observer_fiber,
    observer_parametrization,
)

SMALL = QuadratureConfig(chi_max=1.0, orders=(4, 4, 4))
FLAT_VOLUME = math.pi * (math.sinh(2.0) - 2.0)


def ones(x, X):
    return np.ones(len(X))


def unit_observer(model):
    def f(x, X):
        return X / np.sqrt(model.lagrangian_values(x, X))[:, None]

    return f


class TestConfig:
    def test_orders_must_be_positive(self):
        with pytest.raises(ValidationError, match="must be positive"):
            QuadratureConfig(orders=(0, 4, 4))

    def test_defaults_follow_settings(self):
        cfg = QuadratureConfig()
        assert cfg.chi_max == 3.0
        assert cfg.orders == (8, 8, 8)

    def test_doubled(self):
        assert SMALL.doubled().orders == (8, 8, 8)
        assert SMALL.doubled().chi_max == 1.0


class TestFrame:
    def test_minkowski_frame_is_orthonormal(self, minkowski):
        frame = FiberFrame.adapted(minkowski, np.zeros(4))
        basis = np.vstack([frame.e0, frame.spatial])
        eta = np.diag([1.0, -1.0, -1.0, -1.0])
        np.testing.assert_allclose(basis @ eta @ basis.T, eta, atol=1e-12)

    def test_randers_frame_is_g_orthonormal(self, randers):
        x = np.zeros(4)
        frame = FiberFrame.adapted(randers, x)
        _, g = randers.value_and_metric(x, randers.seed[None, :])
        basis = np.vstack([frame.e0, frame.spatial])
        gram = basis @ g[0] @ basis.T
        np.testing.assert_allclose(gram, np.diag([1.0, -1.0, -1.0, -1.0]) * gram[0, 0], atol=1e-10)

    def test_seed_must_be_timelike(self):
        model = build_model({"kind": "lorentzian", "seed": [0.0, 0.0, 1.0, 0.0]}, n_samples=1)
        with pytest.raises(SeedNotTimelike):
            FiberFrame.adapted(model, np.zeros(4))


class TestParametrization:
    def test_observers_are_unit(self, bogoslovsky):
        x = np.zeros(4)
        u = np.array([[0.0, 1.0, 0.5], [0.3, 2.0, 4.0], [0.5, 0.3, 1.0]])
        xdot, jac, g = observer_parametrization(bogoslovsky, x, u)
        assert jac.shape == (3, 4, 3)
        assert g.shape == (3, 4, 4)
        np.testing.assert_allclose(bogoslovsky.lagrangian_values(x, xdot), 1.0, rtol=1e-12)

    def test_velocity_chart_leaves_cone(self, minkowski):
        with pytest.raises(ConeExit, match="not below 1"):
            observer_parametrization(
                minkowski, np.zeros(4), np.array([1.2, 0.5, 0.5]), FiberChartKind.velocity
            )

    def test_jacobian_matches_differences(self, randers):
        x = np.array([0.1, 0.0, 0.2, -0.1])
        u = np.array([0.4, 1.1, 2.3])
        _, jac, _ = observer_parametrization(randers, x, u)
        step = 1e-5
        for k in range(3):
            du = np.zeros(3)
            du[k] = step
            plus, _, _ = observer_parametrization(randers, x, u + du)
            minus, _, _ = observer_parametrization(randers, x, u - du)
            central = (plus[0] - minus[0]) / (2.0 * step)
            np.testing.assert_allclose(jac[0, :, k], central, atol=1e-7)

    def test_jacobian_is_tangent_to_unit_surface(self, bogoslovsky):
        u = np.array([[0.2, 0.7, 1.0], [0.45, 2.5, 5.0]])
        xdot, jac, g = observer_parametrization(bogoslovsky, np.zeros(4), u)
        # L_{.i} dxdot^i = 2 g_ij xdot^j dxdot^i vanishes on L = 1
        np.testing.assert_allclose(np.einsum("ni,nij,njk->nk", xdot, g, jac), 0.0, atol=1e-12)

    def test_flat_weight(self, minkowski):
        w = fiber_weight(minkowski, np.zeros(4), np.array([0.5, 1.0, 0.3]))
        assert w[0] == pytest.approx(math.sinh(0.5) ** 2 * math.sin(1.0))


class TestIntegration:
    def test_flat_volume(self, minkowski):
        result = integrate_observer_fiber(minkowski, np.zeros(4), ones, SMALL)
        assert float(result) == pytest.approx(FLAT_VOLUME, rel=1e-8)
        assert result.error < 1e-2
        assert result.nodes == 4**3 + 8**3

    def test_velocity_chart_agrees(self, minkowski):
        cfg = QuadratureConfig(chi_max=1.0, orders=(8, 8, 8), chart=FiberChartKind.velocity)
        result = integrate_observer_fiber(minkowski, np.zeros(4), ones, cfg)
        assert float(result) == pytest.approx(FLAT_VOLUME, rel=1e-8)

    def test_vector_integrand(self, minkowski):
        result = integrate_observer_fiber(minkowski, np.zeros(4), unit_observer(minkowski), SMALL)
        assert result.value.shape == (4,)
        assert result.value[0] == pytest.approx(4.0 * math.pi * math.sinh(1.0) ** 3 / 3.0, rel=1e-8)
        np.testing.assert_allclose(result.value[1:], 0.0, atol=1e-10)

    def test_non_homogeneous_integrand(self, minkowski):
        with pytest.raises(NonHomogeneousIntegrand, match="xdot -> 2 xdot"):
            integrate_observer_fiber(minkowski, np.zeros(4), minkowski.lagrangian_values, SMALL)

    def test_without_error_estimate(self, minkowski):
        cfg = SMALL.model_copy(update={"error_estimate": False})
        result = integrate_observer_fiber(minkowski, np.zeros(4), ones, cfg)
        assert result.error == 0.0
        assert result.nodes == 4**3

    def test_threads_do_not_change_result(self, randers):
        x = np.array([0.1, 0.0, 0.2, -0.1])
        f = unit_observer(randers)
        one = integrate_observer_fiber(randers, x, f, SMALL, threads=1)
        many = integrate_observer_fiber(randers, x, f, SMALL, threads=3)
        np.testing.assert_allclose(many.value, one.value, rtol=1e-14)

    def test_prebuilt_rule(self, minkowski):
        quad = build_fiber_quadrature(minkowski, np.zeros(4), SMALL)
        assert len(quad) == 64
        np.testing.assert_allclose(minkowski.lagrangian_values(quad.x, quad.xdot), 1.0, rtol=1e-12)
        result = integrate_observer_fiber(minkowski, np.zeros(4), ones, quad)
        assert float(result) == pytest.approx(FLAT_VOLUME, rel=1e-8)


def _flat_cap(chi: float) -> float:
    return math.pi * (math.sinh(2.0 * chi) - 2.0 * chi)


def _rapidity_bump(x, X):
    xdot = X / np.sqrt(np.abs(X[:, 0] ** 2 - np.sum(X[:, 1:] ** 2, axis=1)))[:, None]
    chi = np.arcsinh(np.linalg.norm(xdot[:, 1:], axis=1))
    return np.exp(-((chi - 1.0) ** 2)) * (1.0 + 0.5 * chi)


class TestAccuracy:
    @pytest.mark.parametrize("chi", [0.5, 1.0, 2.0])
    def test_flat_cap(self, minkowski, chi):
        cfg = QuadratureConfig(chi_max=chi, orders=(4, 4, 4))
        result = integrate_observer_fiber(minkowski, np.zeros(4), ones, cfg)
        assert float(result) == pytest.approx(_flat_cap(chi), rel=1e-6)

    def test_error_decays_geometrically_with_order(self, minkowski):
        errors = []
        for n in (2, 3, 4, 5):
            cfg = QuadratureConfig(chi_max=1.0, orders=(n, 12, 12), error_estimate=False)
            result = integrate_observer_fiber(minkowski, np.zeros(4), ones, cfg)
            errors.append(abs(float(result) - _flat_cap(1.0)))
        assert errors[-1] > 0.0
        for coarse, fine in zip(errors, errors[1:]):
            assert fine < 0.25 * coarse

    def test_radial_profile_against_adaptive_quadrature(self, minkowski):
        chi_max = 2.0
        cfg = QuadratureConfig(chi_max=chi_max, orders=(12, 8, 8))
        result = integrate_observer_fiber(minkowski, np.zeros(4), _rapidity_bump, cfg)

        def radial(chi: float) -> float:
            return math.exp(-((chi - 1.0) ** 2)) * (1.0 + 0.5 * chi) * math.sinh(chi) ** 2

        reference, _ = quad(radial, 0.0, chi_max, epsabs=1e-13, epsrel=1e-13)
        assert float(result) == pytest.approx(4.0 * math.pi * reference, rel=1e-8)

    def test_charts_agree(self, minkowski):
        x = np.zeros(4)
        f = unit_observer(minkowski)
        rapidity = integrate_observer_fiber(
            minkowski, x, f, QuadratureConfig(chi_max=1.0, orders=(8, 8, 8))
        )
        velocity = integrate_observer_fiber(
            minkowski,
            x,
            f,
            QuadratureConfig(chi_max=1.0, orders=(8, 8, 8), chart=FiberChartKind.velocity),
        )
        np.testing.assert_allclose(velocity.value, rapidity.value, rtol=1e-8, atol=1e-12)
