"""Tests for kinetic gases, the field equation and the energy-momentum distribution."""

import json
import math

import numpy as np
import pytest
from pydantic import ValidationError

from finsler_lab.dynamics import (
    GasSpec,
    OrbitalBump,
    RapidityBump,
    arccosh_sq_series,
    averaged_conservation_check,
    build_gas,
    bump,
    em_density,
    em_scalar_and_theta,
    field_residual_kinetic,
    liouville_residual,
    theta_divergence_and_balance,
    vacuum_scalar_E,
)
from finsler_lab.errors import InvalidParameter
from finsler_lab.jets import ChartPoint, JetValue, TruncationOrder
from finsler_lab.quadrature import QuadratureConfig

FIELD_ORDER = TruncationOrder(2, 6)
FIBER_RULE = QuadratureConfig(chi_max=1.0, orders=(4, 4, 4))
# fine angular rule so the spatial axes integrate alike
ISOTROPY_RULE = QuadratureConfig(chi_max=1.0, orders=(4, 8, 16))


@pytest.fixture
def flat_gas(minkowski, models_dir):
    spec = json.loads((models_dir / "bump_gas.json").read_text())
    return build_gas(spec, minkowski)


class TestSeries:
    def test_above_one(self):
        c = arccosh_sq_series(np.array(2.0), 2)
        a = math.acosh(2.0)
        assert c[0] == pytest.approx(a**2)
        assert c[1] == pytest.approx(2.0 * a / math.sqrt(3.0))

    def test_near_one_matches_closed_form(self):
        c = arccosh_sq_series(np.array(1.01), 1)
        a = math.acosh(1.01)
        assert c[0] == pytest.approx(a**2, rel=1e-12)
        assert c[1] == pytest.approx(2.0 * a / math.sqrt(1.01**2 - 1.0), rel=1e-10)

    def test_at_one(self):
        c = arccosh_sq_series(np.array(1.0), 2)
        assert c[0] == pytest.approx(0.0, abs=1e-15)
        assert c[1] == pytest.approx(2.0)

    def test_below_one_continues_analytically(self):
        c = arccosh_sq_series(np.array(0.9), 0)
        assert c[0] == pytest.approx(-(math.acos(0.9) ** 2))


class TestBump:
    def test_peak(self):
        pt = ChartPoint.of((0, 0, 0, 0), (1, 0, 0, 0))
        assert float(bump(JetValue.constant(0.0, TruncationOrder(0, 1), pt))) == pytest.approx(1.0)

    def test_outside_support(self):
        pt = ChartPoint.of((0, 0, 0, 0), (1, 0, 0, 0))
        out = bump(JetValue.constant(np.array([0.5, 2.0]), TruncationOrder(0, 1), pt))
        assert out.value[0] == pytest.approx(math.exp(-1.0))
        assert out.value[1] == 0.0


class TestGasSpec:
    def test_off_axis_bump_must_clear_the_axis(self):
        with pytest.raises(ValidationError, match="not smooth on the seed axis"):
            RapidityBump(center_rapidity=0.5, width=1.0)

    def test_centered_bump_allowed(self):
        assert RapidityBump(center_rapidity=1.5, width=0.5).max_rapidity == 2.0

    def test_orbital_needs_base_metric(self, mth_root):
        with pytest.raises(InvalidParameter, match="base metric"):
            build_gas(GasSpec(profile=OrbitalBump()), mth_root)

    def test_kappa_default(self):
        assert GasSpec().kappa_sq == 1.0


class TestDistribution:
    def test_peak_on_the_seed(self, flat_gas):
        assert flat_gas.phi(np.zeros(4), np.array([1.0, 0.0, 0.0, 0.0])) == pytest.approx(1.0)

    def test_rapidity_profile(self, flat_gas):
        chi_sq = math.atanh(0.5) ** 2
        expected = math.exp(1.0 - 1.0 / (1.0 - chi_sq))
        assert flat_gas.phi(np.zeros(4), np.array([1.0, 0.5, 0.0, 0.0])) == pytest.approx(expected)

    def test_zero_homogeneous(self, flat_gas):
        x, v = np.zeros(4), np.array([1.0, 0.2, -0.3, 0.1])
        assert flat_gas.phi(x, 4.0 * v) == pytest.approx(flat_gas.phi(x, v), rel=1e-12)

    def test_vanishes_off_the_cone(self, flat_gas):
        V = np.array([[0.0, 1.0, 0.0, 0.0], [1.0, 0.99, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0]])
        np.testing.assert_allclose(flat_gas.phi_values(np.zeros(4), V), [0.0, 0.0, 1.0])

    def test_orbital_profile(self, schwarzschild):
        gas = build_gas(
            GasSpec(profile=OrbitalBump(energy_center=1.0, energy_width=0.5, lz_width=2.0)),
            schwarzschild,
        )
        # static observer at r = 10: E = sqrt(1 - 2M/r), Lz = 0
        x = np.array([0.0, 10.0, 1.2, 0.0])
        dE = (math.sqrt(0.8) - 1.0) / 0.5
        expected = math.exp(1.0 - 1.0 / (1.0 - dE**2))
        assert gas.phi(x, np.array([1.0, 0.0, 0.0, 0.0])) == pytest.approx(expected)


class TestFieldEquation:
    def test_schwarzschild_is_vacuum(self, schwarzschild, schwarzschild_point):
        assert vacuum_scalar_E(schwarzschild, schwarzschild_point, FIELD_ORDER) == pytest.approx(
            0.0, abs=1e-8
        )

    def test_flat_residual_is_the_source(self, minkowski, flat_gas):
        pt = ChartPoint.of((0, 0, 0, 0), (1.0, 0.3, 0.0, 0.0))
        residual = field_residual_kinetic(minkowski, flat_gas, pt, FIELD_ORDER)
        assert residual == pytest.approx(flat_gas.kappa_sq * flat_gas.phi(pt.x_array, pt.v_array))


class TestEnergyMomentum:
    def test_theta_trace_is_the_scalar(self, randers, randers_point):
        gas = build_gas(GasSpec(mass=2.0), randers)
        theta = em_scalar_and_theta(randers, gas, randers_point)
        assert np.trace(theta.theta) == pytest.approx(theta.T_frak)
        assert theta.T_frak == pytest.approx(gas.phi(randers_point.x_array, randers_point.v_array))

    def test_balance_residual_vanishes(self, randers, randers_point):
        gas = build_gas(GasSpec(profile=RapidityBump(x_modulation=(0.0, 0.3, 0.0, 0.1))), randers)
        report = theta_divergence_and_balance(randers, gas, randers_point)
        assert report.max_residual < 1e-9

    def test_liouville_of_modulated_gas(self, minkowski):
        gas = build_gas(GasSpec(profile=RapidityBump(x_modulation=(0.0, 0.5, 0.0, 0.0))), minkowski)
        x, v = np.zeros(4), np.array([1.0, 0.3, 0.0, 0.0])
        residual = liouville_residual(minkowski, gas, ChartPoint.of(x, v))
        assert residual == pytest.approx(0.15 * gas.phi(x, v))

    def test_flat_density_is_isotropic(self, minkowski, flat_gas):
        density = em_density(minkowski, flat_gas, np.zeros(4), ISOTROPY_RULE)
        T = density.tensor
        assert T is not None
        off = T - np.diag(np.diag(T))
        np.testing.assert_allclose(off, 0.0, atol=1e-10)
        np.testing.assert_allclose(T[2, 2], T[1, 1], rtol=1e-8)
        np.testing.assert_allclose(T[3, 3], T[1, 1], rtol=1e-8)
        assert T[0, 0] > 0.0

    def test_flat_gas_is_conserved(self, minkowski, flat_gas):
        result = averaged_conservation_check(minkowski, flat_gas, np.zeros(4), FIBER_RULE)
        np.testing.assert_allclose(result.value, 0.0, atol=1e-12)


@pytest.fixture(scope="module")
def orbital_gas(schwarzschild):
    profile = OrbitalBump(energy_center=0.95, energy_width=0.5, lz_width=8.0)
    return build_gas(GasSpec(profile=profile), schwarzschild)


class TestConservation:
    def test_orbital_gas_solves_liouville(self, schwarzschild, orbital_gas):
        x, v = np.array([0.0, 8.0, 1.2, 0.0]), np.array([1.2, 0.1, 0.01, 0.02])
        assert orbital_gas.phi(x, v) > 0.1
        residual = liouville_residual(schwarzschild, orbital_gas, ChartPoint.of(x, v))
        assert abs(residual) <= 1e-8

    def test_spatial_modulation_breaks_liouville(self, minkowski):
        gas = build_gas(GasSpec(profile=RapidityBump(x_modulation=(0.0, 0.0, 0.4, 0.0))), minkowski)
        x, v = np.zeros(4), np.array([1.0, 0.1, -0.3, 0.2])
        residual = liouville_residual(minkowski, gas, ChartPoint.of(x, v))
        assert residual == pytest.approx(-0.12 * gas.phi(x, v))

    def test_flat_gas_averaged_law(self, minkowski, flat_gas):
        result = averaged_conservation_check(minkowski, flat_gas, np.zeros(4), FIBER_RULE)
        assert np.max(np.abs(result.value)) <= 1e-6

    def test_orbital_gas_averaged_law(self, schwarzschild, orbital_gas):
        x = np.array([0.0, 8.0, 1.2, 0.0])
        result = averaged_conservation_check(schwarzschild, orbital_gas, x, FIBER_RULE)
        assert np.max(np.abs(result.value)) <= 1e-6

    def test_modulated_gas_is_not_conserved(self, minkowski):
        gas = build_gas(GasSpec(profile=RapidityBump(x_modulation=(0.0, 0.5, 0.0, 0.0))), minkowski)
        result = averaged_conservation_check(minkowski, gas, np.zeros(4), FIBER_RULE)
        assert np.max(np.abs(result.value)) > 1e-3

    def test_averaged_law_is_the_classical_divergence(self, minkowski):
        # phi = exp(c x^1) psi(chi) gives T^j_i(x) = exp(c x^1) T^j_i(0), so T^j_i;j = c T^1_i
        c = 0.5
        gas = build_gas(GasSpec(profile=RapidityBump(x_modulation=(0.0, c, 0.0, 0.0))), minkowski)
        x = np.zeros(4)
        averaged = averaged_conservation_check(minkowski, gas, x, FIBER_RULE)
        density = em_density(minkowski, gas, x, FIBER_RULE)
        assert density.tensor is not None
        np.testing.assert_allclose(averaged.value, c * density.tensor[1], rtol=1e-10, atol=1e-12)
