"""Conservation monitors along a computed geodesic."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson

from finsler_lab.catalog import FinslerModel
from finsler_lab.geodesics.integrator import GeodesicState
from finsler_lab.jets import ChartPoint, TruncationOrder

logger = logging.getLogger(__name__)

_FIRST_ORDER = TruncationOrder(1, 1)
# |d_k L| below this (relative to max(1, |L|)) along the whole path marks x^k cyclic
CYCLIC_TOL = 1e-12


@dataclass
class DriftReport:
    """Drift of the conserved quantities of a trajectory.

    ``momenta`` maps each cyclic coordinate k to max |p_k(s) - p_k(0)| with
    p_k = L_{.k} / 2. ``epsilon`` is sign(L) at the start.
    """

    L_initial: float
    L_drift: float
    epsilon: float = 1.0
    momenta: dict[int, float] = field(default_factory=dict)
    hilbert_length: float = float("nan")
    parameter_span: float = 0.0

    @property
    def max_drift(self) -> float:
        return max([self.L_drift, *self.momenta.values()])


def _first_jets(
    model: FinslerModel, trajectory: Sequence[GeodesicState]
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """L, d_k L and L_{.k} at every state."""
    L = np.empty(len(trajectory))
    dx = np.empty((len(trajectory), 4))
    dv = np.empty((len(trajectory), 4))
    for n, state in enumerate(trajectory):
        jet = model.lagrangian_jet(ChartPoint.of(state.x, state.v), _FIRST_ORDER)
        L[n] = float(jet.value)
        dx[n] = jet.grad_x().value
        dv[n] = jet.grad_v().value
    return L, dx, dv


def _hilbert_integral(
    trajectory: Sequence[GeodesicState], L: np.ndarray, dv: np.ndarray
) -> float:
    s = np.array([state.s for state in trajectory])
    v = np.array([state.v for state in trajectory])
    # omega_i = F_{.i} = epsilon L_{.i} / (2 F)
    integrand = np.sign(L) * np.einsum("ni,ni->n", dv, v) / (2.0 * np.sqrt(np.abs(L)))
    return float(simpson(integrand, x=s))


def hilbert_length(trajectory: Sequence[GeodesicState], model: FinslerModel) -> float:
    """Integral of omega_i xdot^i = F(x, xdot) along the lift, by composite Simpson."""
    L, _, dv = _first_jets(model, trajectory)
    return _hilbert_integral(trajectory, L, dv)


def geodesic_invariants(
    trajectory: Sequence[GeodesicState], model: FinslerModel
) -> DriftReport:
    if not trajectory:
        raise ValueError("Empty trajectory")
    L, dx, dv = _first_jets(model, trajectory)
    report = DriftReport(
        L_initial=float(L[0]),
        L_drift=float(np.max(np.abs(L - L[0]))),
        epsilon=float(np.sign(L[0])),
        parameter_span=trajectory[-1].s - trajectory[0].s,
    )
    scale = np.maximum(1.0, np.abs(L))[:, None]
    cyclic = np.flatnonzero(np.all(np.abs(dx) <= CYCLIC_TOL * scale, axis=0))
    p = 0.5 * dv
    for k in cyclic:
        report.momenta[int(k)] = float(np.max(np.abs(p[:, k] - p[0, k])))
    if len(trajectory) >= 2:
        report.hilbert_length = _hilbert_integral(trajectory, L, dv)
    logger.debug(
        "L drift %.3g, cyclic coordinates %s", report.L_drift, sorted(report.momenta)
    )
    return report
