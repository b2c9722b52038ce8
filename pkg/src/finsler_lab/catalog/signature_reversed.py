"""Signature-reversed Lagrangians: L = omega(xdot)^2 - Fhat(xdot)^2.

Fhat = sqrt(h(xdot, xdot)) + c(xdot) is a positive-definite Randers-type norm;
the future timelike cone is {omega(xdot) > Fhat(xdot)}.
"""

import logging

import numpy as np

from finsler_lab.catalog.base import FinslerModel, linear_form, quadratic_form
from finsler_lab.catalog.descriptors import SignatureReversedSpec
from finsler_lab.errors import InvalidParameter
from finsler_lab.jets import JetValue

logger = logging.getLogger(__name__)


class SignatureReversedModel(FinslerModel):
    kind = "signature_reversed"
    spec: SignatureReversedSpec

    def fhat(self, x: list[JetValue], v: list[JetValue]) -> JetValue:
        h = [c.jet(x) for c in self.spec.fhat.metric]
        return quadratic_form(h, v).sqrt() + linear_form(self.spec.fhat.one_form.jet(x), v)

    def lagrangian(self, x: list[JetValue], v: list[JetValue]) -> JetValue:
        omega = linear_form(self.spec.omega.jet(x), v)
        F = self.fhat(x, v)
        return omega * omega - F * F

    def in_closed_form_cone(self, x: np.ndarray, v: np.ndarray) -> bool:
        """omega(xdot) > Fhat(xdot)."""
        h = np.array([c(x) for c in self.spec.fhat.metric])
        c = self.spec.fhat.one_form(x)
        fhat = np.sqrt(np.sum(h * v * v)) + float(c @ v)
        return float(self.spec.omega(x) @ v) > fhat

    def validate_parameters(self, rng: np.random.Generator, n_samples: int) -> None:
        for x in self.chart_box.sample(rng, n_samples):
            h = np.array([c(x) for c in self.spec.fhat.metric])
            if np.any(h <= 0.0):
                raise InvalidParameter(f"Fhat metric {h} is not positive definite at x = {x}")
            c = self.spec.fhat.one_form(x)
            if float(np.sum(c * c / h)) >= 1.0:
                raise InvalidParameter(f"Fhat one-form {c} is too long at x = {x}")
        logger.debug("Fhat positivity holds at %d samples", n_samples)
