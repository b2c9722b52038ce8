"""Base interface for Finsler Lagrangians."""

import logging
from abc import ABC, abstractmethod
from collections.abc import Sequence
from typing import ClassVar

import numpy as np

from finsler_lab.catalog.descriptors import BaseMetricSpec, ChartBox, ModelSpec, OneFormSpec
from finsler_lab.config import settings
from finsler_lab.errors import DomainError, OutsideDomain
from finsler_lab.jets import (
    DIM,
    AnyPoint,
    ChartBatch,
    ChartPoint,
    JetValue,
    TruncationOrder,
    seed_vectors,
    stack,
)

logger = logging.getLogger(__name__)

_VALUE_ORDER = TruncationOrder(0, 0)
_HESSIAN_ORDER = TruncationOrder(0, 2)


def quadratic_form(diag: Sequence[JetValue] | np.ndarray, v: Sequence[JetValue]) -> JetValue:
    """sum_k diag_k (v^k)^2."""
    out = diag[0] * (v[0] * v[0])
    for k in range(1, DIM):
        out = out + diag[k] * (v[k] * v[k])
    return out


def linear_form(b: Sequence[JetValue] | np.ndarray, v: Sequence[JetValue]) -> JetValue:
    """sum_k b_k v^k."""
    out = v[0] * b[0]
    for k in range(1, DIM):
        out = out + v[k] * b[k]
    return out


class FinslerModel(ABC):
    """A Finsler Lagrangian L(x, xdot) with its smoothness domain.

    Subclasses implement ``lagrangian`` on position and velocity jets using
    elementwise jet arithmetic only, so the same code serves single points
    and batches of velocities.
    """

    kind: ClassVar[str]
    is_lorentzian: ClassVar[bool] = False

    def __init__(self, spec: ModelSpec) -> None:
        self.spec = spec

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.spec.model_dump_json()})"

    @abstractmethod
    def lagrangian(self, x: list[JetValue], v: list[JetValue]) -> JetValue:
        """L from the eight chart-variable jets."""

    def validate_parameters(self, rng: np.random.Generator, n_samples: int) -> None:
        """Check structural conditions at sampled chart points; raise InvalidParameter."""

    @property
    def base_metric(self) -> BaseMetricSpec | None:
        return getattr(self.spec, "base_metric", None)

    @property
    def one_form(self) -> OneFormSpec | None:
        return getattr(self.spec, "one_form", None)

    @property
    def seed(self) -> np.ndarray:
        return np.array(self.spec.seed, dtype=float)

    @property
    def chart_box(self) -> ChartBox:
        if self.spec.chart_box is not None:
            return self.spec.chart_box
        if self.base_metric is not None:
            return self.base_metric.default_box()
        return ChartBox(lower=(-1.0, -1.0, -1.0, -1.0), upper=(1.0, 1.0, 1.0, 1.0))

    # -- evaluation -------------------------------------------------------

    def lagrangian_jet(self, pt: AnyPoint, order: TruncationOrder | None = None) -> JetValue:
        """Jet of L at ``pt``; raises OutsideDomain off the smoothness domain."""
        order = order or settings.truncation_order()
        X, V = seed_vectors(pt, order)
        try:
            return self.lagrangian(
                [X[k] for k in range(DIM)], [V[..., k] for k in range(DIM)]
            )
        except OutsideDomain:
            raise
        except DomainError as exc:
            raise OutsideDomain(f"{self.kind}: L is not smooth at {pt}: {exc}") from exc

    def lagrangian_value(
        self, x: Sequence[float] | np.ndarray, v: Sequence[float] | np.ndarray
    ) -> float:
        return float(self.lagrangian_jet(ChartPoint.of(x, v), _VALUE_ORDER).value)

    def lagrangian_values(self, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        """L at one position for each row of ``v``."""
        return self.lagrangian_jet(ChartBatch(x, v), _VALUE_ORDER).value

    def value_and_metric(self, x: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """L and g_ij = L_{.i.j}/2 at one position for each row of ``v``."""
        L = self.lagrangian_jet(ChartBatch(x, v), _HESSIAN_ORDER)
        return L.value, 0.5 * L.grad_v().grad_v().value

    # -- observer reference -----------------------------------------------

    def reference_covector(self, x: list[JetValue]) -> JetValue:
        """Unit covector u_i(x) of the seed observer, used to measure rapidities.

        With a base metric u_i = a_ij e^j / sqrt(a(e, e)); otherwise the Hilbert
        form of L at the chart-box center along the seed, held constant.
        """
        e = self.seed
        if self.base_metric is not None:
            diag = self.base_metric.diagonal_jet(x)
            norm = quadratic_form(diag, list(e)).sqrt()
            return stack([diag[k] * e[k] for k in range(DIM)]) / norm
        center = self.chart_box.center
        L = self.lagrangian_jet(ChartPoint.of(center, e), TruncationOrder(0, 1))
        omega = L.grad_v().value / (2.0 * np.sqrt(float(L.value)))
        return JetValue.constant(omega, x[0].order, x[0].point)
