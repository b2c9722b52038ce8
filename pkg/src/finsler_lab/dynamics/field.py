"""The Finsler gravity field equation, vacuum and sourced by a kinetic gas."""

import logging

import numpy as np

from finsler_lab.catalog import FinslerModel
from finsler_lab.dynamics.gas import KineticGas
from finsler_lab.geometry import GeometryBundle
from finsler_lab.jets import AnyPoint, TruncationOrder, seed_vectors

logger = logging.getLogger(__name__)


def vacuum_scalar(bundle: GeometryBundle) -> np.ndarray:
    """E = g^ij (L R0)_{.i.j} / 2 - 3 R0 - g^ij (P_{i|j} - P_i P_j + (nabla P_i)_{.j})."""
    g_inv = bundle.fundamental.g_inv_value
    LR0 = (bundle.L * bundle.R0).grad_v().grad_v().value
    P = bundle.P_trace
    P_bar, nabla_P = bundle.covariant(P, "d")
    P0 = P.value
    landsberg = P_bar.value - np.einsum("...i,...j->...ij", P0, P0) + nabla_P.grad_v().value
    E = (
        0.5 * np.einsum("...ij,...ij->...", g_inv, LR0)
        - 3.0 * bundle.R0.value
        - np.einsum("...ij,...ij->...", g_inv, landsberg)
    )
    return E  # type: ignore[no-any-return]


def vacuum_scalar_E(
    model: FinslerModel, pt: AnyPoint, order: TruncationOrder | None = None
) -> float | np.ndarray:
    """The vacuum field scalar at a point (a float) or a batch (an array)."""
    E = vacuum_scalar(GeometryBundle(model, pt, order))
    logger.debug("E at %s: %s", pt, E)
    return float(E) if np.ndim(E) == 0 else E


def field_residual_kinetic(
    model: FinslerModel,
    gas: KineticGas,
    pt: AnyPoint,
    order: TruncationOrder | None = None,
) -> float | np.ndarray:
    """E + kappa^2 phi; zero where (L, phi) solve the sourced field equation."""
    bundle = GeometryBundle(model, pt, order)
    X, V = seed_vectors(pt, TruncationOrder(0, 0))
    phi = gas.phi_jet(bundle.L.truncate(TruncationOrder(0, 0)), X, V).value
    residual = vacuum_scalar(bundle) + gas.kappa_sq * phi
    return float(residual) if np.ndim(residual) == 0 else residual
