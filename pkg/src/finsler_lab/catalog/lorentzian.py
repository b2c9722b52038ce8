"""Lorentzian metrics as Finsler Lagrangians: L = a_ij(x) xdot^i xdot^j."""

from finsler_lab.catalog.base import FinslerModel, quadratic_form
from finsler_lab.catalog.descriptors import LorentzianSpec
from finsler_lab.jets import JetValue


class LorentzianModel(FinslerModel):
    kind = "lorentzian"
    is_lorentzian = True
    spec: LorentzianSpec

    def lagrangian(self, x: list[JetValue], v: list[JetValue]) -> JetValue:
        return quadratic_form(self.spec.base_metric.diagonal_jet(x), v)
