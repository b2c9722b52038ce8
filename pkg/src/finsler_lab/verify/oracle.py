"""Finite-difference oracle for the partial derivatives of L.

Every partial up to a total order is approximated by a product of central
difference stencils, one per variable, and improved by one Richardson step.
The stencil of order e in one variable samples at offsets (e/2 - j) h with
weights (-1)^j C(e, j) / h^e, so it is second-order accurate and the
extrapolation (4 D(h/2) - D(h)) / 3 is fourth-order accurate.

The same stencils give a spray built only from values of L, and a plain
fixed-step RK4 on it serves as an independent geodesic oracle.
"""

import itertools
import logging
import math
from collections import Counter, defaultdict

import numpy as np

from finsler_lab.catalog import FinslerModel
from finsler_lab.errors import DomainError, StencilLeavesDomain
from finsler_lab.jets import DIM, ChartPoint, MultiIndex, TruncationOrder
from finsler_lab.verify.report import CheckReport

logger = logging.getLogger(__name__)

ORACLE_TOL = 1e-5
DEFAULT_STEP = 2e-2

# offsets are stored in units of h / 2 so odd orders stay on an integer grid
Offset = tuple[int, ...]


def _exponents(max_order: int) -> list[tuple[int, ...]]:
    out = []
    for k in range(max_order + 1):
        for combo in itertools.combinations_with_replacement(range(2 * DIM), k):
            counts = Counter(combo)
            out.append(tuple(counts.get(i, 0) for i in range(2 * DIM)))
    return out


def _stencil(exps: tuple[int, ...]) -> list[tuple[Offset, float]]:
    per_var = [
        [(e - 2 * j, (-1) ** j * math.comb(e, j)) for j in range(e + 1)] for e in exps
    ]
    out = []
    for terms in itertools.product(*per_var):
        offset = tuple(t[0] for t in terms)
        weight = math.prod(t[1] for t in terms)
        out.append((offset, float(weight)))
    return out


def _evaluate(
    model: FinslerModel, pt: ChartPoint, offsets: set[Offset], h: float
) -> dict[Offset, float]:
    """L at pt + offset * h / 2, batched over velocities for each position offset."""
    by_x: dict[Offset, list[Offset]] = defaultdict(list)
    for off in sorted(offsets):
        by_x[off[:DIM]].append(off[DIM:])
    x0, v0 = pt.x_array, pt.v_array
    values: dict[Offset, float] = {}
    for dx, dvs in by_x.items():
        x = x0 + 0.5 * h * np.array(dx, dtype=float)
        V = v0 + 0.5 * h * np.array(dvs, dtype=float)
        try:
            L = model.lagrangian_values(x, V)
        except DomainError as exc:
            raise StencilLeavesDomain(
                f"Stencil of width {h:g} around {pt} leaves the smoothness domain: {exc}"
            ) from exc
        if not np.all(np.isfinite(L)):
            raise StencilLeavesDomain(f"Non-finite L on the stencil around {pt}")
        for dv, value in zip(dvs, L, strict=True):
            values[(*dx, *dv)] = float(value)
    return values


def _differences(
    model: FinslerModel, pt: ChartPoint, exponents: list[tuple[int, ...]], h: float
) -> np.ndarray:
    stencils = [_stencil(e) for e in exponents]
    needed = {off for s in stencils for off, _ in s}
    values = _evaluate(model, pt, needed, h)
    out = np.empty(len(exponents))
    for n, (exps, stencil) in enumerate(zip(exponents, stencils, strict=True)):
        total = sum(w * values[off] for off, w in stencil)
        out[n] = total / h ** sum(exps)
    return out


def fd_partials(
    model: FinslerModel, pt: ChartPoint, max_order: int = 4, h: float = DEFAULT_STEP
) -> dict[MultiIndex, float]:
    """Richardson-extrapolated central differences of L for every partial up to max_order."""
    exponents = _exponents(max_order)
    coarse = _differences(model, pt, exponents, h)
    fine = _differences(model, pt, exponents, 0.5 * h)
    extrapolated = (4.0 * fine - coarse) / 3.0
    return {
        MultiIndex(e[:DIM], e[DIM:]): float(d)  # type: ignore[arg-type]
        for e, d in zip(exponents, extrapolated, strict=True)
    }


def fd_oracle_compare(
    model: FinslerModel,
    pt: ChartPoint,
    max_order: int = 4,
    h: float = DEFAULT_STEP,
    tolerance: float = ORACLE_TOL,
) -> CheckReport:
    """Jet partials of L against the finite-difference oracle.

    The error of each partial is |D_fd - D_jet| / max(1, |D_jet|); details hold
    the worst error per total order.
    """
    jet = model.lagrangian_jet(pt, TruncationOrder(max_order, max_order))
    oracle = fd_partials(model, pt, max_order, h)
    worst: dict[str, float] = {}
    errors = []
    for idx, approx in oracle.items():
        exact = float(jet.partial(idx))
        err = abs(approx - exact) / max(1.0, abs(exact))
        errors.append(err)
        key = f"order_{idx.x_total + idx.v_total}"
        worst[key] = max(worst.get(key, 0.0), err)
    report = CheckReport.of(f"fd_oracle ({model.kind})", errors, tolerance, worst)
    report.samples = 1
    logger.debug("FD oracle at %s: %s", pt, worst)
    return report


# -- spray and geodesics ----------------------------------------------------

SPRAY_STEP = 2e-3


def _unit(*slots: int) -> tuple[int, ...]:
    exps = [0] * (2 * DIM)
    for k in slots:
        exps[k] += 1
    return tuple(exps)


_HESSIAN = [_unit(DIM + i, DIM + j) for i in range(DIM) for j in range(i, DIM)]
_MIXED = [_unit(DIM + h, j) for h in range(DIM) for j in range(DIM)]
_GRADIENT = [_unit(h) for h in range(DIM)]


def fd_spray(
    model: FinslerModel, x: np.ndarray, v: np.ndarray, h: float = SPRAY_STEP
) -> np.ndarray:
    """G^i = g^ih (L_{.h,j} xdot^j - L_{,h}) / 4 with every partial taken by differences."""
    pt = ChartPoint.of(x, v)
    exponents = _HESSIAN + _MIXED + _GRADIENT
    fine = _differences(model, pt, exponents, 0.5 * h)
    coarse = _differences(model, pt, exponents, h)
    d = (4.0 * fine - coarse) / 3.0
    n_hess, n_mixed = len(_HESSIAN), len(_MIXED)
    g = np.empty((DIM, DIM))
    for n, (i, j) in enumerate((i, j) for i in range(DIM) for j in range(i, DIM)):
        g[i, j] = g[j, i] = 0.5 * d[n]
    mixed = d[n_hess : n_hess + n_mixed].reshape(DIM, DIM)
    Y = mixed @ pt.v_array - d[n_hess + n_mixed :]
    return 0.25 * np.linalg.solve(g, Y)  # type: ignore[no-any-return]


def fd_geodesic(
    model: FinslerModel,
    x0: np.ndarray,
    v0: np.ndarray,
    step: float,
    n_steps: int,
    h: float = SPRAY_STEP,
) -> np.ndarray:
    """Fixed-step RK4 for xddot^i = -2 G^i with the finite-difference spray.

    Rows are (x, xdot) after 0, 1, ..., n_steps steps.
    """

    def rhs(y: np.ndarray) -> np.ndarray:
        return np.concatenate([y[DIM:], -2.0 * fd_spray(model, y[:DIM], y[DIM:], h)])

    y = np.concatenate([np.asarray(x0, dtype=float), np.asarray(v0, dtype=float)])
    rows = [y]
    for _ in range(n_steps):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * step * k1)
        k3 = rhs(y + 0.5 * step * k2)
        k4 = rhs(y + step * k3)
        y = y + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rows.append(y)
    logger.debug("FD geodesic: %d steps of %g from x = %s", n_steps, step, x0)
    return np.array(rows)
