"""Randers Lagrangians: F = sqrt|a(xdot, xdot)| + b(xdot), L = sign(a) F^2."""

import logging

import numpy as np

from finsler_lab.catalog.base import FinslerModel, linear_form, quadratic_form
from finsler_lab.catalog.descriptors import RandersSpec
from finsler_lab.errors import InvalidParameter
from finsler_lab.jets import JetValue

logger = logging.getLogger(__name__)


class RandersModel(FinslerModel):
    kind = "randers"
    spec: RandersSpec

    def lagrangian(self, x: list[JetValue], v: list[JetValue]) -> JetValue:
        A = quadratic_form(self.spec.base_metric.diagonal_jet(x), v)
        F = A.signed_abs().sqrt() + linear_form(self.spec.one_form.jet(x), v)
        return F * F * np.sign(A.value)

    def norm_squared(self, x: np.ndarray) -> float:
        """a^ij(x) b_i(x) b_j(x)."""
        diag = self.spec.base_metric.diagonal(x)
        b = self.spec.one_form(x)
        return float(np.sum(b * b / diag))

    def validate_parameters(self, rng: np.random.Generator, n_samples: int) -> None:
        for x in self.chart_box.sample(rng, n_samples):
            if not np.any(self.spec.one_form(x)):
                continue
            beta_sq = self.norm_squared(x)
            if not 0.0 < beta_sq < 1.0:
                raise InvalidParameter(
                    f"Randers one-form has a^ij b_i b_j = {beta_sq:.6g} outside (0, 1) at x = {x}"
                )
        logger.debug("Randers norm condition holds at %d samples", n_samples)
