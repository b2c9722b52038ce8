"""Classical (pseudo-)Riemannian curvature of a base metric, from a_ij(x) alone.

Used as an independent oracle for Lorentzian models: only x-jets of the
diagonal metric enter, never the Finsler pipeline.
"""

import logging
from dataclasses import dataclass

import numpy as np

from finsler_lab.catalog.descriptors import BaseMetricSpec
from finsler_lab.jets import (
    DIM,
    ChartPoint,
    JetValue,
    TruncationOrder,
    jet_einsum,
    seed_vectors,
    stack,
)

logger = logging.getLogger(__name__)

_X_ORDER = TruncationOrder(3, 0)


def _diagonal_matrix(entries: list[JetValue]) -> JetValue:
    zero = entries[0] * 0.0
    return stack([stack([entries[i] if i == j else zero for j in range(DIM)]) for i in range(DIM)])


@dataclass(frozen=True)
class ClassicalGeometry:
    """gamma[i, j, k] = gamma^i_jk, riemann[i, l, k, j] = r^i_lkj, ricci[l, k] = r^i_lik."""

    x: np.ndarray
    metric: np.ndarray
    christoffels: np.ndarray
    christoffel_gradient: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    ricci_scalar: float

    @classmethod
    def at(cls, base_metric: BaseMetricSpec, x: np.ndarray) -> "ClassicalGeometry":
        x = np.asarray(x, dtype=float)
        X, _ = seed_vectors(ChartPoint.of(x, (1.0, 0.0, 0.0, 0.0)), _X_ORDER)
        diag = base_metric.diagonal_jet([X[k] for k in range(DIM)])
        a = _diagonal_matrix(diag)
        a_inv = _diagonal_matrix([d.reciprocal() for d in diag])
        da = a.grad_x()  # da[h, j, k] = d_k a_hj
        lowered = 0.5 * (jet_einsum("hkj->hjk", da) + da - jet_einsum("jkh->hjk", da))
        gamma = jet_einsum("ih,hjk->ijk", a_inv, lowered)
        dgamma = gamma.grad_x().value  # dgamma[i, j, l, k] = d_k gamma^i_jl
        g0 = gamma.value
        riemann = (
            np.einsum("ijlk->ilkj", dgamma)
            - np.einsum("iklj->ilkj", dgamma)
            + np.einsum("ikm,mjl->ilkj", g0, g0)
            - np.einsum("ijm,mkl->ilkj", g0, g0)
        )
        ricci = np.einsum("ilik->lk", riemann)
        a0 = a.value
        r = float(np.einsum("lk,lk->", np.linalg.inv(a0), ricci))
        logger.debug("Classical curvature at x = %s: r = %.6g", x, r)
        return cls(
            x=x,
            metric=a0,
            christoffels=g0,
            christoffel_gradient=dgamma,
            riemann=riemann,
            ricci=ricci,
            ricci_scalar=r,
        )

    def connection(self, v: np.ndarray) -> np.ndarray:
        """gamma^i_jk v^k, the Lorentzian nonlinear connection."""
        return np.einsum("ijk,k->ij", self.christoffels, v)  # type: ignore[no-any-return]

    def ricci_form(self, v: np.ndarray) -> float:
        return float(v @ self.ricci @ v)


    def curvature(self, v: np.ndarray) -> np.ndarray:
        """R^i_jk = r^i_lkj v^l, the nonlinear curvature of a Lorentzian spray."""
        return np.einsum("ilkj,l->ijk", self.riemann, v)  # type: ignore[no-any-return]
