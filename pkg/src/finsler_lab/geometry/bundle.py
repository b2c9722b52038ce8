"""All geometric objects at one chart point, computed lazily stage by stage."""

import functools
import logging

import numpy as np

from finsler_lab.catalog import FinslerModel
from finsler_lab.config import settings
from finsler_lab.geometry.core import (
    FundamentalTensors,
    chern_rund_and_landsberg,
    covariant_derivative,
    curvature_and_ricci,
    fundamental_tensors,
    spray_and_connection,
)
from finsler_lab.jets import AnyPoint, JetValue, TruncationOrder

logger = logging.getLogger(__name__)


class GeometryBundle:
    """g, g^-1, C, F, omega, ell, G, N, R, R0, Gamma, P at a point.

    Stages (fundamental, spray, curvature, Chern-Rund) are evaluated on first
    access, so callers needing only g pay only for g. Every entry is a jet
    truncated to the order left after the derivatives that produced it.
    """

    def __init__(
        self,
        model: FinslerModel,
        pt: AnyPoint,
        order: TruncationOrder | None = None,
        eps_div: float | None = None,
        tol_det: float | None = None,
    ) -> None:
        self.model = model
        self.point = pt
        self.order = order or settings.truncation_order()
        self._eps_div = eps_div
        self._tol_det = tol_det
        self.L = model.lagrangian_jet(pt, self.order)
        logger.debug("Bundle at %s, order %s", pt, self.order)

    # -- stages -----------------------------------------------------------

    @functools.cached_property
    def fundamental(self) -> FundamentalTensors:
        return fundamental_tensors(self.L, self._eps_div, self._tol_det)

    @functools.cached_property
    def _spray(self) -> tuple[JetValue, JetValue]:
        return spray_and_connection(self.L, self.fundamental.g_inv)

    @functools.cached_property
    def _curvature(self) -> tuple[JetValue, JetValue]:
        return curvature_and_ricci(self.L, self.N)

    @functools.cached_property
    def _chern_rund(self) -> tuple[JetValue, JetValue, JetValue]:
        f = self.fundamental
        return chern_rund_and_landsberg(f.g, f.g_inv, self.N)

    # -- named entries ----------------------------------------------------

    @property
    def epsilon(self) -> np.ndarray:
        return self.fundamental.epsilon

    @property
    def xdot(self) -> JetValue:
        return self.fundamental.xdot

    @property
    def g(self) -> JetValue:
        return self.fundamental.g

    @property
    def g_inv(self) -> JetValue:
        return self.fundamental.g_inv

    @property
    def det_g(self) -> JetValue:
        return self.fundamental.det_g

    @property
    def C(self) -> JetValue:
        return self.fundamental.C

    @property
    def C_trace(self) -> JetValue:
        return self.fundamental.C_trace

    @property
    def F(self) -> JetValue:
        return self.fundamental.F

    @property
    def omega(self) -> JetValue:
        return self.fundamental.omega

    @property
    def ell(self) -> JetValue:
        return self.fundamental.ell

    @property
    def G(self) -> JetValue:
        return self._spray[0]

    @property
    def N(self) -> JetValue:
        return self._spray[1]

    @property
    def R(self) -> JetValue:
        return self._curvature[0]

    @property
    def R0(self) -> JetValue:
        return self._curvature[1]

    @property
    def Gamma(self) -> JetValue:
        return self._chern_rund[0]

    @property
    def P(self) -> JetValue:
        return self._chern_rund[1]

    @property
    def P_trace(self) -> JetValue:
        return self._chern_rund[2]

    # -- operators --------------------------------------------------------

    def covariant(self, T: JetValue, kinds: str) -> tuple[JetValue, JetValue]:
        """(T_{|k}, nabla T) with the Chern-Rund connection."""
        return covariant_derivative(T, kinds, self.N, self.Gamma, self.xdot)

    def quantity(self, name: str) -> JetValue:
        """Entry by name, for homogeneity audits and reports."""
        if name not in QUANTITIES:
            raise KeyError(f"Unknown bundle quantity {name!r}")
        return getattr(self, name)  # type: ignore[no-any-return]

    def scalars(self) -> dict[str, float]:
        """Point-level scalars: L, F, det g, R0."""
        return {
            "L": float(self.L.value),
            "F": float(self.F.value),
            "det_g": float(self.det_g.value),
            "R0": float(self.R0.value),
        }


# name -> positive homogeneity degree in xdot
QUANTITIES: dict[str, int] = {
    "L": 2,
    "g": 0,
    "C": -1,
    "F": 1,
    "omega": 0,
    "ell": 0,
    "G": 2,
    "N": 1,
    "Gamma": 0,
    "R": 1,
    "R0": 0,
    "P": 0,
    "P_trace": 0,
}
