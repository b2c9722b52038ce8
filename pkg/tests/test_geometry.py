"""Tests for the geometric tower: metric, spray, curvature and Chern-Rund data."""

import math

import numpy as np
import pytest

from finsler_lab.config import settings
from finsler_lab.dynamics import (
    GasSpec,
    build_gas,
    theta_divergence_and_balance,
    vacuum_scalar,
    vacuum_scalar_E,
)
from finsler_lab.errors import NullDirection
from finsler_lab.geometry import (
    QUANTITIES,
    GeometryBundle,
    covariant_derivative,
    fundamental_tensors,
    spray_and_connection,
)
from finsler_lab.jets import ChartBatch, ChartPoint, TruncationOrder, jet_einsum
from finsler_lab.verify import sample_points

ETA = np.diag([1.0, -1.0, -1.0, -1.0])
FIBER = TruncationOrder(0, 3)
SPRAY = TruncationOrder(1, 3)
CURVATURE = TruncationOrder(2, 4)
FIELD = TruncationOrder(2, 6)
ALL_MODELS = [
    "minkowski",
    "schwarzschild",
    "randers",
    "bogoslovsky",
    "mth_root",
    "signature_reversed",
    "frw",
]


class TestFundamentalTensors:
    def test_minkowski_metric(self, minkowski):
        b = GeometryBundle(minkowski, ChartPoint.of((0, 0, 0, 0), (1.0, 0.5, 0.0, 0.0)), FIBER)
        np.testing.assert_allclose(b.g.value, ETA)
        np.testing.assert_allclose(b.g_inv.value, ETA)
        np.testing.assert_allclose(b.C.value, 0.0, atol=1e-14)
        assert float(b.det_g.value) == pytest.approx(-1.0)
        assert float(b.F.value) == pytest.approx(math.sqrt(0.75))
        assert b.epsilon == 1.0

    def test_inverse_jet_is_exact(self, randers, randers_point):
        b = GeometryBundle(randers, randers_point, FIBER)
        product = jet_einsum("ij,jk->ik", b.g, b.g_inv)
        np.testing.assert_allclose(product.value, np.eye(4), atol=1e-12)
        np.testing.assert_allclose(product.coeffs[..., 1:], 0.0, atol=1e-10)

    def test_determinant_matches_value(self, randers, randers_point):
        b = GeometryBundle(randers, randers_point, FIBER)
        assert float(b.det_g.value) == pytest.approx(np.linalg.det(b.g.value))

    def test_cartan_tensor_annihilates_xdot(self, randers, randers_point):
        b = GeometryBundle(randers, randers_point, FIBER)
        Cv = np.einsum("ijk,k->ij", b.C.value, randers_point.v_array)
        np.testing.assert_allclose(Cv, 0.0, atol=1e-12)

    def test_cartan_tensor_is_symmetric(self, bogoslovsky):
        pt = ChartPoint.of((0.1, 0, 0, 0), (1.0, 0.2, 0.1, -0.1))
        C = GeometryBundle(bogoslovsky, pt, FIBER).C.value
        np.testing.assert_allclose(C, C.transpose(1, 0, 2), atol=1e-12)
        np.testing.assert_allclose(C, C.transpose(2, 1, 0), atol=1e-12)

    def test_reeb_normalization(self, randers, randers_point):
        b = GeometryBundle(randers, randers_point, FIBER)
        assert float(b.omega.value @ b.ell.value) == pytest.approx(1.0)

    def test_spacelike_signed_point(self, minkowski):
        b = GeometryBundle(minkowski, ChartPoint.of((0, 0, 0, 0), (0.0, 1.0, 0.0, 0.0)), FIBER)
        assert b.epsilon == -1.0
        assert float(b.F.value) == pytest.approx(1.0)

    def test_null_direction(self, minkowski):
        b = GeometryBundle(minkowski, ChartPoint.of((0, 0, 0, 0), (1.0, 1.0, 0.0, 0.0)), FIBER)
        with pytest.raises(NullDirection, match="below threshold"):
            b.g

    def test_batch_matches_single_points(self, randers):
        x = np.array([0.1, -0.2, 0.3, 0.0])
        V = np.array([[1.0, 0.2, -0.1, 0.05], [2.0, 0.0, 0.3, 0.0]])
        batch = GeometryBundle(randers, ChartBatch(x, V), FIBER)
        for i, v in enumerate(V):
            single = GeometryBundle(randers, ChartPoint.of(x, v), FIBER)
            np.testing.assert_allclose(batch.g.value[i], single.g.value, rtol=1e-12)
            np.testing.assert_allclose(batch.C_trace.value[i], single.C_trace.value, atol=1e-12)


class TestSprayAndConnection:
    def test_minkowski_is_flat(self, minkowski):
        pt = ChartPoint.of((0.3, 0, 0, 0), (1.0, 0.2, 0.0, 0.0))
        b = GeometryBundle(minkowski, pt, CURVATURE)
        np.testing.assert_allclose(b.G.value, 0.0, atol=1e-14)
        np.testing.assert_allclose(b.N.value, 0.0, atol=1e-14)
        assert float(b.R0.value) == pytest.approx(0.0, abs=1e-12)

    def test_schwarzschild_static_observer(self, schwarzschild):
        M, r = 1.0, 10.0
        pt = ChartPoint.of((0.0, r, 1.2, 0.0), (1.0, 0.0, 0.0, 0.0))
        b = GeometryBundle(schwarzschild, pt, SPRAY)
        # G^i = gamma^i_jk xdot^j xdot^k / 2
        assert b.G.value[1] == pytest.approx(0.5 * M * (r - 2 * M) / r**3)
        assert b.N.value[0, 1] == pytest.approx(M / (r * (r - 2 * M)))

    def test_connection_is_degree_one(self, schwarzschild, schwarzschild_point):
        b = GeometryBundle(schwarzschild, schwarzschild_point, SPRAY)
        Nv = b.N.value @ schwarzschild_point.v_array
        np.testing.assert_allclose(Nv, 2.0 * b.G.value, rtol=1e-10)

    def test_chern_rund_symmetric(self, randers, randers_point):
        b = GeometryBundle(randers, randers_point, CURVATURE)
        Gamma = b.Gamma.value
        np.testing.assert_allclose(Gamma, Gamma.transpose(0, 2, 1), atol=1e-10)

    def test_landsberg_is_zero_for_lorentzian(self, schwarzschild, schwarzschild_point):
        b = GeometryBundle(schwarzschild, schwarzschild_point, CURVATURE)
        np.testing.assert_allclose(b.P.value, 0.0, atol=1e-10)

    def test_curvature_antisymmetric(self, randers, randers_point):
        R = GeometryBundle(randers, randers_point, CURVATURE).R.value
        np.testing.assert_allclose(R, -R.transpose(0, 2, 1), atol=1e-12)


class TestBundleAccess:
    def test_quantity_lookup(self, minkowski):
        b = GeometryBundle(minkowski, ChartPoint.of((0, 0, 0, 0), (1.0, 0, 0, 0)), FIBER)
        assert b.quantity("L") is b.L
        assert QUANTITIES["C"] == -1

    def test_unknown_quantity(self, minkowski):
        b = GeometryBundle(minkowski, ChartPoint.of((0, 0, 0, 0), (1.0, 0, 0, 0)), FIBER)
        with pytest.raises(KeyError, match="Unknown bundle quantity"):
            b.quantity("torsion")

    def test_covariant_rejects_bad_kinds(self, minkowski):
        b = GeometryBundle(minkowski, ChartPoint.of((0, 0, 0, 0), (1.0, 0, 0, 0)), CURVATURE)
        with pytest.raises(ValueError, match="rank-2 tensor"):
            b.covariant(b.g, "ddd")

    def test_scalars(self, minkowski):
        b = GeometryBundle(minkowski, ChartPoint.of((0, 0, 0, 0), (2.0, 0, 0, 0)), CURVATURE)
        s = b.scalars()
        assert s["L"] == pytest.approx(4.0)
        assert s["F"] == pytest.approx(2.0)
        assert s["det_g"] == pytest.approx(-1.0)
        assert s["R0"] == pytest.approx(0.0, abs=1e-12)


class TestStages:
    def test_fundamental_tensors_from_a_jet(self, randers, randers_point):
        L = randers.lagrangian_jet(randers_point, FIBER)
        ft = fundamental_tensors(L)
        _, g = randers.value_and_metric(randers_point.x_array, randers_point.v_array[None, :])
        np.testing.assert_allclose(ft.g_value, g[0], rtol=1e-10)
        np.testing.assert_allclose(ft.g_inv_value, np.linalg.inv(ft.g_value), rtol=1e-10)

    def test_spray_from_stages(self, schwarzschild, schwarzschild_point):
        L = schwarzschild.lagrangian_jet(schwarzschild_point, SPRAY)
        G, N = spray_and_connection(L, fundamental_tensors(L).g_inv)
        b = GeometryBundle(schwarzschild, schwarzschild_point, SPRAY)
        np.testing.assert_allclose(G.value, b.G.value, rtol=1e-12)
        np.testing.assert_allclose(N.value, b.N.value, rtol=1e-12)

    def test_metric_is_parallel(self, bogoslovsky):
        pt = ChartPoint.of((0.1, 0, 0, 0), (1.0, 0.2, 0.1, -0.1))
        b = GeometryBundle(bogoslovsky, pt, TruncationOrder(1, 4))
        g_bar, g_nabla = covariant_derivative(b.g, "dd", b.N, b.Gamma, b.xdot)
        scale = np.abs(b.g.value).max()
        np.testing.assert_allclose(g_bar.value / scale, 0.0, atol=1e-8)
        np.testing.assert_allclose(g_nabla.value / scale, 0.0, atol=1e-8)


def _assert_stable(low, high) -> None:
    low, high = np.asarray(low), np.asarray(high)
    assert np.max(np.abs(high - low)) <= 1e-12 * max(1.0, float(np.max(np.abs(low))))


class TestTruncationStability:
    @pytest.fixture(params=ALL_MODELS)
    def model_and_point(self, request):
        model = request.getfixturevalue(request.param)
        return model, sample_points(model, 1, seed=11)[0]

    def test_ricci_scalar(self, model_and_point):
        model, pt = model_and_point
        low = GeometryBundle(model, pt, CURVATURE).R0.value
        high = GeometryBundle(model, pt, CURVATURE.bumped()).R0.value
        _assert_stable(low, high)

    def test_vacuum_scalar(self, model_and_point):
        model, pt = model_and_point
        low = vacuum_scalar_E(model, pt, FIELD)
        _assert_stable(low, vacuum_scalar_E(model, pt, FIELD.bumped()))

    def test_theta_divergence(self, model_and_point):
        model, pt = model_and_point
        gas = build_gas(GasSpec(), model)
        order = settings.fiber_order()
        low = theta_divergence_and_balance(model, gas, pt, order).theta_div
        high = theta_divergence_and_balance(model, gas, pt, order.bumped()).theta_div
        _assert_stable(low, high)

    def test_full_tower_on_frw(self, frw):
        pt = ChartPoint.of((1.5, -0.2, 0.3, 0.0), (1.0, 0.1, 0.0, 0.2))
        order = settings.truncation_order()
        assert order.bumped() == TruncationOrder(order.max_x_order + 1, order.max_v_order + 1)
        low, high = GeometryBundle(frw, pt, order), GeometryBundle(frw, pt, order.bumped())
        _assert_stable(low.R0.value, high.R0.value)
        _assert_stable(vacuum_scalar(low), vacuum_scalar(high))
