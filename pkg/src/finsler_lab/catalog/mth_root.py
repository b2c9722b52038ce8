"""Polynomial m-th root Lagrangians: L = sign(G) |G|^(2/m), G = G_{a1..am} xdot^a1 ... xdot^am."""

import numpy as np

from finsler_lab.catalog.base import FinslerModel
from finsler_lab.catalog.descriptors import MthRootSpec
from finsler_lab.jets import DIM, JetValue


class MthRootModel(FinslerModel):
    kind = "mth_root"
    spec: MthRootSpec

    def form(self, x: list[JetValue], v: list[JetValue]) -> JetValue:
        powers: dict[tuple[int, int], JetValue] = {}
        G: JetValue | None = None
        for term in self.spec.terms:
            mono = term.coefficient.jet(x)
            for k in range(DIM):
                e = term.powers[k]
                if e == 0:
                    continue
                if (k, e) not in powers:
                    powers[(k, e)] = v[k] ** e
                mono = mono * powers[(k, e)]
            G = mono if G is None else G + mono
        assert G is not None
        return G

    def lagrangian(self, x: list[JetValue], v: list[JetValue]) -> JetValue:
        G = self.form(x, v)
        return G.signed_abs().power(2.0 / self.spec.m) * np.sign(G.value)
