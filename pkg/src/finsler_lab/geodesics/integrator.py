"""Integration of the Finsler geodesic equation xddot^i + 2 G^i(x, xdot) = 0."""

import enum
import logging
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, PositiveFloat, PositiveInt
from scipy.integrate import RK45

from finsler_lab.catalog import FinslerModel
from finsler_lab.config import settings
from finsler_lab.errors import (
    DegenerateHessian,
    DomainError,
    LeftAdmissibleDomain,
    NullDirection,
    StepUnderflow,
)
from finsler_lab.jets import DIM, ChartPoint, TruncationOrder

logger = logging.getLogger(__name__)


class IntegratorMethod(enum.StrEnum):
    rk4 = "rk4"
    rk45 = "rk45"


class IntegratorConfig(BaseModel):
    """Fixed-step RK4 by default; adaptive RK45 with ``tol`` on request.

    ``span`` caps the affine parameter length; without it RK4 runs exactly
    ``max_steps`` steps and RK45 integrates over ``step * max_steps``.
    """

    model_config = {"frozen": True}

    method: IntegratorMethod = IntegratorMethod.rk4
    step: PositiveFloat = 0.01
    tol: PositiveFloat = 1e-9
    max_steps: PositiveInt = 10_000
    span: PositiveFloat | None = None


@dataclass(frozen=True)
class GeodesicState:
    s: float
    x: np.ndarray
    v: np.ndarray

    @property
    def y(self) -> np.ndarray:
        return np.concatenate([self.x, self.v])

    @classmethod
    def of(cls, s: float, y: np.ndarray) -> "GeodesicState":
        return cls(float(s), np.array(y[:DIM], dtype=float), np.array(y[DIM:], dtype=float))


def spray_value(
    model: FinslerModel,
    x: np.ndarray,
    v: np.ndarray,
    order: TruncationOrder | None = None,
) -> np.ndarray:
    """G^i at (x, xdot); only the value of g^-1 is needed, so jets stay shallow."""
    pt = ChartPoint.of(x, v)
    L = model.lagrangian_jet(pt, order or settings.geodesic_order())
    if abs(float(L.value)) <= settings.eps_div * float(L.magnitude()):
        raise NullDirection(f"Geodesic reached a null direction at {pt}")
    dL = L.grad_v()
    g = 0.5 * dL.grad_v().value
    det = np.linalg.det(g)
    if abs(det) <= settings.tol_det * np.prod(np.linalg.norm(g, axis=-1)):
        raise DegenerateHessian(f"det g = {det:.3g} along the geodesic at {pt}")
    Y = dL.grad_x().value @ pt.v_array - L.grad_x().value
    return 0.25 * np.linalg.solve(g, Y)  # type: ignore[no-any-return]


class _GeodesicField:
    """Right-hand side (x, xdot) -> (xdot, -2G) remembering the last good state."""

    def __init__(self, model: FinslerModel, start: GeodesicState, order: TruncationOrder) -> None:
        self.model = model
        self.order = order
        self.last_good = start

    def __call__(self, s: float, y: np.ndarray) -> np.ndarray:
        try:
            G = spray_value(self.model, y[:DIM], y[DIM:], self.order)
        except DomainError as exc:
            raise LeftAdmissibleDomain(
                f"Geodesic left the admissible domain after s = {self.last_good.s:.6g}: {exc}",
                self.last_good,
            ) from exc
        return np.concatenate([y[DIM:], -2.0 * G])


def rk4_step(field: _GeodesicField, s: float, y: np.ndarray, h: float) -> np.ndarray:
    k1 = field(s, y)
    k2 = field(s + 0.5 * h, y + 0.5 * h * k1)
    k3 = field(s + 0.5 * h, y + 0.5 * h * k2)
    k4 = field(s + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)  # type: ignore[no-any-return]


def integrate_geodesic(
    model: FinslerModel,
    state0: GeodesicState,
    cfg: IntegratorConfig | None = None,
    order: TruncationOrder | None = None,
) -> list[GeodesicState]:
    """Trajectory from ``state0``; the first entry is ``state0`` itself."""
    cfg = cfg or IntegratorConfig()
    field = _GeodesicField(model, state0, order or settings.geodesic_order())
    # reject a bad start before stepping
    field(state0.s, state0.y)
    if cfg.method is IntegratorMethod.rk4:
        trajectory = _integrate_rk4(field, state0, cfg)
    else:
        trajectory = _integrate_rk45(field, state0, cfg)
    logger.info(
        "Geodesic (%s): %d states, s in [%.6g, %.6g]",
        cfg.method,
        len(trajectory),
        trajectory[0].s,
        trajectory[-1].s,
    )
    return trajectory


def _integrate_rk4(
    field: _GeodesicField, state0: GeodesicState, cfg: IntegratorConfig
) -> list[GeodesicState]:
    trajectory = [state0]
    s, y = state0.s, state0.y
    s_end = state0.s + cfg.span if cfg.span is not None else np.inf
    for _ in range(cfg.max_steps):
        h = min(cfg.step, s_end - s)
        if h <= 0.0:
            break
        y = rk4_step(field, s, y, h)
        s = s + h
        state = GeodesicState.of(s, y)
        field.last_good = state
        trajectory.append(state)
    return trajectory


def _integrate_rk45(
    field: _GeodesicField, state0: GeodesicState, cfg: IntegratorConfig
) -> list[GeodesicState]:
    span = cfg.span if cfg.span is not None else cfg.step * cfg.max_steps
    solver = RK45(
        field,
        state0.s,
        state0.y,
        state0.s + span,
        first_step=cfg.step,
        rtol=cfg.tol,
        atol=cfg.tol,
    )
    trajectory = [state0]
    for _ in range(cfg.max_steps):
        message = solver.step()
        if solver.status == "failed":
            raise StepUnderflow(f"RK45 failed after s = {field.last_good.s:.6g}: {message}")
        state = GeodesicState.of(solver.t, solver.y)
        field.last_good = state
        trajectory.append(state)
        if solver.status == "finished":
            break
    return trajectory
