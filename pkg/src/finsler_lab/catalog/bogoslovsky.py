"""Bogoslovsky (Kropina for q = -1) Lagrangians.

F = |a(xdot, xdot)|^((1 - q)/2) b(xdot)^q, L = sign(a) F^2. The admissible set
depends on q and is gated pointwise by the Hessian checks, not here.
"""

import numpy as np

from finsler_lab.catalog.base import FinslerModel, linear_form, quadratic_form
from finsler_lab.catalog.descriptors import BogoslovskySpec
from finsler_lab.errors import InvalidParameter
from finsler_lab.jets import JetValue


class BogoslovskyModel(FinslerModel):
    kind = "bogoslovsky"
    spec: BogoslovskySpec

    def __init__(self, spec: BogoslovskySpec) -> None:
        if spec.q == 1.0:
            raise InvalidParameter("Bogoslovsky exponent q = 1 degenerates (L = sign(a) b^2)")
        super().__init__(spec)

    def lagrangian(self, x: list[JetValue], v: list[JetValue]) -> JetValue:
        q = self.spec.q
        A = quadratic_form(self.spec.base_metric.diagonal_jet(x), v)
        B = linear_form(self.spec.one_form.jet(x), v)
        return A.signed_abs().power(1.0 - q) * B.power(2.0 * q) * np.sign(A.value)
