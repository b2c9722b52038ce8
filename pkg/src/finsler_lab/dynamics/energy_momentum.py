"""Energy-momentum of a kinetic gas: the scalar T, the distribution Theta and its balance.

Pointwise quantities live on the observer bundle; the density and the
averaged conservation law integrate them over the observer fiber at x.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from finsler_lab.catalog import FinslerModel
from finsler_lab.config import settings
from finsler_lab.dynamics.gas import KineticGas
from finsler_lab.geometry import GeometryBundle, horizontal
from finsler_lab.jets import (
    AnyPoint,
    ChartBatch,
    JetValue,
    TruncationOrder,
    jet_einsum,
    seed_vectors,
)
from finsler_lab.quadrature import (
    FiberIntegral,
    FiberQuadrature,
    QuadratureConfig,
    integrate_observer_fiber,
)

logger = logging.getLogger(__name__)

# velocity depth needed for Theta and the fundamental tensors alone
_THETA_ORDER = TruncationOrder(0, 3)
# rows per jet batch when integrating over a fiber
NODE_CHUNK = 256


@dataclass
class ThetaComponents:
    """T = m phi / 2, Theta[j, i] = T xdot^j xdot_i / L and, when computed, Theta^j_i|j."""

    T_frak: float | np.ndarray
    theta: np.ndarray
    theta_div: np.ndarray | None = None


@dataclass
class BalanceReport:
    theta_div: np.ndarray
    nabla_T: float | np.ndarray
    residual: np.ndarray

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.residual)))


@dataclass
class EnergyMomentumDensity:
    """Fiber average of Theta at x; ``tensor`` is T^i_j for Lorentzian models."""

    density: np.ndarray
    error: np.ndarray
    tensor: np.ndarray | None = None


def _theta_jets(
    bundle: GeometryBundle, gas: KineticGas
) -> tuple[JetValue, JetValue, JetValue]:
    """(T, Theta[j, i], xdot_i) as jets."""
    f = bundle.fundamental
    X, V = seed_vectors(bundle.point, bundle.order)
    T = 0.5 * gas.mass * gas.phi_jet(bundle.L, X, V)
    xdot_low = jet_einsum("...ij,...j->...i", f.g, f.xdot)
    outer = jet_einsum("...j,...i->...ji", f.xdot, xdot_low)
    theta = outer * (T / bundle.L)[..., None, None]
    return T, theta, xdot_low


def _scalar(a: np.ndarray) -> float | np.ndarray:
    return float(a) if np.ndim(a) == 0 else a


def em_scalar_and_theta(
    model: FinslerModel,
    gas: KineticGas,
    pt: AnyPoint,
    order: TruncationOrder | None = None,
) -> ThetaComponents:
    bundle = GeometryBundle(model, pt, order or _THETA_ORDER)
    T, theta, _ = _theta_jets(bundle, gas)
    return ThetaComponents(T_frak=_scalar(T.value), theta=theta.value)


def theta_divergence_and_balance(
    model: FinslerModel,
    gas: KineticGas,
    pt: AnyPoint,
    order: TruncationOrder | None = None,
) -> BalanceReport:
    """Theta^j_i|j by the Chern-Rund divergence, nabla T, and their balance residual.

    The residual Theta^j_i|j - xdot_i nabla T / L vanishes identically.
    """
    bundle = GeometryBundle(model, pt, order or settings.fiber_order())
    T, theta, xdot_low = _theta_jets(bundle, gas)
    D, _ = bundle.covariant(theta, "ud")
    theta_div = jet_einsum("...jij->...i", D).value
    nabla_T = np.einsum("...k,...k->...", horizontal(T, bundle.N).value, bundle.xdot.value)
    expected = xdot_low.value * (nabla_T / bundle.L.value)[..., None]
    return BalanceReport(
        theta_div=theta_div, nabla_T=_scalar(nabla_T), residual=theta_div - expected
    )


def liouville_residual(
    model: FinslerModel,
    gas: KineticGas,
    pt: AnyPoint,
    order: TruncationOrder | None = None,
) -> float | np.ndarray:
    """nabla phi = xdot^i delta_i phi; zero for a collisionless gas."""
    bundle = GeometryBundle(model, pt, order or settings.fiber_order())
    X, V = seed_vectors(bundle.point, bundle.order)
    phi = gas.phi_jet(bundle.L, X, V)
    nabla = np.einsum("...k,...k->...", horizontal(phi, bundle.N).value, bundle.xdot.value)
    return _scalar(nabla)


# -- fiber integrals --------------------------------------------------------


def _chunked(
    x: np.ndarray, X: np.ndarray, fn: Callable[[ChartBatch], np.ndarray]
) -> np.ndarray:
    parts = [fn(ChartBatch(x, X[i : i + NODE_CHUNK])) for i in range(0, len(X), NODE_CHUNK)]
    return np.concatenate(parts, axis=0)


def averaged_conservation_check(
    model: FinslerModel,
    gas: KineticGas,
    x: np.ndarray,
    quad: FiberQuadrature | QuadratureConfig | None = None,
    threads: int | None = None,
) -> FiberIntegral:
    """The four fiber integrals of Theta^j_i|j at x."""
    x = np.asarray(x, dtype=float)

    def divergence(xx: np.ndarray, X: np.ndarray) -> np.ndarray:
        return _chunked(xx, X, lambda pt: theta_divergence_and_balance(model, gas, pt).theta_div)

    result = integrate_observer_fiber(model, x, divergence, quad, threads=threads, check=False)
    logger.info(
        "Averaged conservation at x = %s: max |integral| %.3g (error %.3g)",
        x,
        float(np.max(np.abs(result.value))),
        float(np.max(result.error)),
    )
    return result


def em_density(
    model: FinslerModel,
    gas: KineticGas,
    x: np.ndarray,
    quad: FiberQuadrature | QuadratureConfig | None = None,
    threads: int | None = None,
) -> EnergyMomentumDensity:
    """Fiber integral of Theta at x and, for Lorentzian models, T^i_j = density / sqrt|det a|."""
    x = np.asarray(x, dtype=float)

    def theta(xx: np.ndarray, X: np.ndarray) -> np.ndarray:
        return _chunked(xx, X, lambda pt: em_scalar_and_theta(model, gas, pt).theta)

    result = integrate_observer_fiber(model, x, theta, quad, threads=threads, check=False)
    out = EnergyMomentumDensity(density=result.value, error=result.error)
    if model.is_lorentzian and model.base_metric is not None:
        det_a = float(np.prod(model.base_metric.diagonal(x)))
        out.tensor = result.value / np.sqrt(abs(det_a))
    return out
