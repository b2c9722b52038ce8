"""Kinetic gases: 1-particle distributions phi(x, xdot) on the observer bundle.

Profiles are positively 0-homogeneous in xdot and vanish outside a compact
part of every timelike fiber. They are evaluated in jet arithmetic so their
horizontal and vertical derivatives are available to the field equations.
"""

import logging
import math
from typing import Annotated, Literal

import numpy as np
from pydantic import BaseModel, Field, NonNegativeFloat, PositiveFloat, model_validator

from finsler_lab.catalog import FinslerModel
from finsler_lab.catalog.base import linear_form
from finsler_lab.config import settings
from finsler_lab.errors import InvalidParameter
from finsler_lab.jets import (
    DIM,
    AnyPoint,
    ChartBatch,
    ChartPoint,
    JetValue,
    TruncationOrder,
    jet_einsum,
    seed_vectors,
)

logger = logging.getLogger(__name__)

Vector4 = tuple[float, float, float, float]

# bump values below exp(1 - 1 / BUMP_EDGE) ~ 1e-43 are treated as zero
BUMP_EDGE = 1e-2
# width of the window around gamma = 1 where arccosh^2 is re-expanded from gamma = 1
_NEAR_ONE = 0.05
_SERIES_TERMS = 60


class RapidityBump(BaseModel):
    """A exp(c . x) psi((chi - center)^2 / width^2), chi the rapidity against the seed.

    center = 0 gives a profile in chi^2, smooth across the seed axis; centered
    profiles need center >= width so their support avoids the axis.
    """

    model_config = {"frozen": True}

    type: Literal["rapidity_bump"] = "rapidity_bump"
    center_rapidity: NonNegativeFloat = 0.0
    width: PositiveFloat = 1.0
    amplitude: NonNegativeFloat = 1.0
    x_modulation: Vector4 = (0.0, 0.0, 0.0, 0.0)

    @model_validator(mode="after")
    def check_axis(self) -> "RapidityBump":
        if 0.0 < self.center_rapidity < self.width:
            raise ValueError(
                f"Bump centered at rapidity {self.center_rapidity} with width {self.width} "
                "is not smooth on the seed axis"
            )
        return self

    @property
    def max_rapidity(self) -> float:
        return self.center_rapidity + self.width


class OrbitalBump(BaseModel):
    """A psi((E - E0)^2 / wE^2) psi((Lz - Lz0)^2 / wL^2) for diagonal static base metrics.

    E = a_00 xdot^0 / F and Lz = -a_33 xdot^3 / F are constant along geodesics
    of a base metric independent of x^0 and x^3.
    """

    model_config = {"frozen": True}

    type: Literal["orbital"] = "orbital"
    energy_center: float = 1.0
    energy_width: PositiveFloat = 0.1
    lz_center: float = 0.0
    lz_width: PositiveFloat = 1.0
    amplitude: NonNegativeFloat = 1.0


GasProfile = Annotated[RapidityBump | OrbitalBump, Field(discriminator="type")]


class GasSpec(BaseModel):
    model_config = {"frozen": True}

    mass: PositiveFloat = 1.0
    kappa_sq: PositiveFloat = Field(default_factory=lambda: settings.kappa_sq)
    profile: GasProfile = RapidityBump()


# -- univariate series ------------------------------------------------------


def _series_at_one() -> np.ndarray:
    """Taylor coefficients of arccosh(1 + t)^2 in t."""
    d = np.zeros(_SERIES_TERMS + 1)
    d[1] = 2.0
    for k in range(1, _SERIES_TERMS):
        d[k + 1] = -(k**2) * d[k] / ((k + 1) * (2 * k + 1))
    return d


_AT_ONE = _series_at_one()


def arccosh_sq_series(a0: np.ndarray, K: int) -> np.ndarray:
    """Taylor coefficients of h(gamma) = arccosh(gamma)^2 at gamma = a0.

    h is entire near gamma = 1 (h = -arccos(gamma)^2 below 1) and satisfies
    (gamma^2 - 1) h'' + gamma h' = 2, which gives the recurrence away from 1.
    """
    a0 = np.asarray(a0, dtype=float)
    c = np.zeros((K + 1, *a0.shape))
    near = np.abs(a0 - 1.0) < _NEAR_ONE
    g = np.where(near, 2.0, a0)

    above = g > 1.0
    acosh = np.arccosh(np.where(above, g, 2.0))
    acos = np.arccos(np.clip(np.where(above, 0.0, g), -1.0, 1.0))
    c[0] = np.where(above, acosh**2, -(acos**2))
    if K >= 1:
        slope_above = 2.0 * acosh / np.sqrt(np.abs(g * g - 1.0))
        c[1] = np.where(above, slope_above, 2.0 * acos / np.sin(acos))
    for k in range(K - 1):
        rhs = (2.0 if k == 0 else 0.0) - g * (k + 1) * (2 * k + 1) * c[k + 1] - k**2 * c[k]
        c[k + 2] = rhs / ((g * g - 1.0) * (k + 1) * (k + 2))

    if np.any(near):
        t = a0 - 1.0
        for j in range(K + 1):
            terms = [
                _AT_ONE[k] * math.comb(k, j) * t ** (k - j) for k in range(j, _SERIES_TERMS + 1)
            ]
            c[j] = np.where(near, np.sum(terms, axis=0), c[j])
    return c


def bump(s: JetValue) -> JetValue:
    """psi(s) = exp(1 - 1 / (1 - s)) for s < 1, zero (with all derivatives) beyond."""
    inside = s.value < 1.0 - BUMP_EDGE
    mask = inside.astype(float)
    safe = s * mask
    return (1.0 - (1.0 - safe).reciprocal()).exp() * mask


# -- the gas ----------------------------------------------------------------


class KineticGas:
    """A kinetic gas of particles of mass m with distribution phi on a model."""

    def __init__(self, spec: GasSpec, model: FinslerModel) -> None:
        self.spec = spec
        self.model = model
        if isinstance(spec.profile, OrbitalBump) and model.base_metric is None:
            raise InvalidParameter("Orbital gas profiles need a model with a base metric")

    def __repr__(self) -> str:
        return f"KineticGas({self.spec.model_dump_json()})"

    @property
    def mass(self) -> float:
        return self.spec.mass

    @property
    def kappa_sq(self) -> float:
        return self.spec.kappa_sq

    def phi_jet(self, L: JetValue, X: JetValue, V: JetValue) -> JetValue:
        """phi as a jet, from L and the seed vectors at the same point and order."""
        x = [X[k] for k in range(DIM)]
        positive = (L.value > 0.0).astype(float)
        if not np.any(positive):
            return L * 0.0
        L_safe = L * positive + (1.0 - positive)
        profile = self.spec.profile
        if isinstance(profile, RapidityBump):
            psi = self._rapidity_profile(profile, x, V, L_safe)
            amp = linear_form(np.array(profile.x_modulation), x).exp() * profile.amplitude
        else:
            psi = self._orbital_profile(profile, x, V, L_safe)
            amp = profile.amplitude
        return psi * amp * positive

    def _rapidity_profile(
        self, p: RapidityBump, x: list[JetValue], V: JetValue, L: JetValue
    ) -> JetValue:
        u = self.model.reference_covector(x)
        gamma = jet_einsum("...i,...i->...", u, V) / L.sqrt()
        chi_sq = gamma.compose(arccosh_sq_series)
        w2 = p.width**2
        if p.center_rapidity == 0.0:
            return bump(chi_sq / w2)
        lo = (p.center_rapidity - p.width) ** 2
        hi = (p.center_rapidity + p.width) ** 2
        mask = ((chi_sq.value > lo) & (chi_sq.value < hi)).astype(float)
        chi = (chi_sq * mask + (1.0 - mask) * p.center_rapidity**2).sqrt()
        return bump((chi - p.center_rapidity) * (chi - p.center_rapidity) / w2) * mask

    def _orbital_profile(
        self, p: OrbitalBump, x: list[JetValue], V: JetValue, L: JetValue
    ) -> JetValue:
        assert self.model.base_metric is not None
        a = self.model.base_metric.diagonal_jet(x)
        F = L.sqrt()
        E = a[0] * V[..., 0] / F
        Lz = -(a[3] * V[..., 3]) / F
        dE = (E - p.energy_center) / p.energy_width
        dL = (Lz - p.lz_center) / p.lz_width
        return bump(dE * dE) * bump(dL * dL)

    # -- evaluation -------------------------------------------------------

    def phi_at(self, pt: AnyPoint, order: TruncationOrder) -> JetValue:
        L = self.model.lagrangian_jet(pt, order)
        X, V = seed_vectors(pt, order)
        return self.phi_jet(L, X, V)

    def phi(self, x: np.ndarray, v: np.ndarray) -> float:
        return float(self.phi_at(ChartPoint.of(x, v), TruncationOrder(0, 0)).value)

    def phi_values(self, x: np.ndarray, V: np.ndarray) -> np.ndarray:
        """phi at one position for each row of V."""
        return self.phi_at(ChartBatch(x, V), TruncationOrder(0, 0)).value


def build_gas(spec: GasSpec | dict[str, object], model: FinslerModel) -> KineticGas:
    if isinstance(spec, dict):
        spec = GasSpec.model_validate(spec)
    gas = KineticGas(spec, model)
    logger.info("Gas built: %s profile on %s", spec.profile.type, model.kind)
    return gas
