"""Observer-space fibers: charts, the measure dSigma_x^+ and tensor-product Gauss rules.

A fiber chart maps u = (chi, theta, phi) (or (v, theta, phi) with v = tanh chi)
to a cone direction n(u) built on a frame adapted to the model's seed, and
rescales it to the unit representative xdot(u) with L(x, xdot(u)) = 1.
"""

import enum
import logging
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, Field, PositiveFloat, field_validator
from scipy.special import roots_legendre

from finsler_lab.catalog import FinslerModel
from finsler_lab.causal import timelike_region_mask
from finsler_lab.config import settings
from finsler_lab.errors import ConeExit, NodeOutsideCone, NonHomogeneousIntegrand, SeedNotTimelike

logger = logging.getLogger(__name__)

# f(x, Xdot) with Xdot of shape (n, 4); returns an array with leading axis n
FiberIntegrand = Callable[[np.ndarray, np.ndarray], np.ndarray]

HOMOGENEITY_TOL = 1e-8


class FiberChartKind(enum.StrEnum):
    rapidity = "rapidity"
    velocity = "velocity"


class QuadratureConfig(BaseModel):
    model_config = {"frozen": True}

    chi_max: PositiveFloat = Field(default_factory=lambda: settings.chi_max)
    orders: tuple[int, int, int] = Field(
        default_factory=lambda: tuple(settings.quadrature_orders)  # type: ignore[arg-type]
    )
    chart: FiberChartKind = FiberChartKind.rapidity
    error_estimate: bool = True

    @field_validator("orders")
    @classmethod
    def check_orders(cls, v: tuple[int, int, int]) -> tuple[int, int, int]:
        if min(v) < 1:
            raise ValueError(f"Gauss orders must be positive, got {v}")
        return v

    def doubled(self) -> "QuadratureConfig":
        return self.model_copy(update={"orders": tuple(2 * n for n in self.orders)})


@dataclass(frozen=True)
class FiberFrame:
    """e0: unit seed; e1..e3: g(x, e0)-orthonormal with g(e_a, e_a) = -1."""

    x: np.ndarray
    e0: np.ndarray
    spatial: np.ndarray

    @classmethod
    def adapted(cls, model: FinslerModel, x: np.ndarray) -> "FiberFrame":
        x = np.asarray(x, dtype=float)
        seed = model.seed
        if not timelike_region_mask(model, x, seed[None, :])[0]:
            raise SeedNotTimelike(f"Seed direction {seed} is not timelike at x = {x}")
        L, g = model.value_and_metric(x, seed[None, :])
        e0 = seed / np.sqrt(L[0])
        g = g[0]
        spatial: list[np.ndarray] = []
        # Gram-Schmidt on the coordinate axes, most spacelike remainders first
        candidates = []
        for c in np.eye(4):
            e = c - (c @ g @ e0) * e0
            candidates.append((float(e @ g @ e), e))
        for _, e in sorted(candidates, key=lambda t: t[0]):
            for b in spatial:
                e = e + (e @ g @ b) * b
            norm = -(e @ g @ e)
            if norm > 1e-8 * max(1.0, float(e @ e)):
                spatial.append(e / np.sqrt(norm))
            if len(spatial) == 3:
                break
        return cls(x=x, e0=e0, spatial=np.array(spatial))


@dataclass(frozen=True)
class FiberQuadrature:
    """Gauss nodes u, unit observers xdot(u) and weights including w(u)."""

    x: np.ndarray
    config: QuadratureConfig
    nodes: np.ndarray
    xdot: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass
class FiberIntegral:
    value: np.ndarray
    error: np.ndarray
    nodes: int

    def __float__(self) -> float:
        return float(self.value)


def _directions(
    frame: FiberFrame, u: np.ndarray, chart: FiberChartKind
) -> tuple[np.ndarray, np.ndarray]:
    """n(u), shape (n, 4), and dn/du, shape (n, 4, 3)."""
    u = np.atleast_2d(np.asarray(u, dtype=float))
    r, theta, phi = u[:, 0], u[:, 1], u[:, 2]
    st, ct, sp, cp = np.sin(theta), np.cos(theta), np.sin(phi), np.cos(phi)
    e1, e2, e3 = frame.spatial
    m = st[:, None] * (cp[:, None] * e1 + sp[:, None] * e2) + ct[:, None] * e3
    m_theta = ct[:, None] * (cp[:, None] * e1 + sp[:, None] * e2) - st[:, None] * e3
    m_phi = st[:, None] * (-sp[:, None] * e1 + cp[:, None] * e2)
    if chart is FiberChartKind.rapidity:
        a, b, da, db = np.cosh(r), np.sinh(r), np.sinh(r), np.cosh(r)
    else:
        if np.any(np.abs(r) >= 1.0):
            raise ConeExit(f"Velocity chart coordinate {r.max():.6g} is not below 1")
        a, b, da, db = np.ones_like(r), r, np.zeros_like(r), np.ones_like(r)
    n = a[:, None] * frame.e0 + b[:, None] * m
    dn = np.stack(
        [
            da[:, None] * frame.e0 + db[:, None] * m,
            b[:, None] * m_theta,
            b[:, None] * m_phi,
        ],
        axis=-1,
    )
    return n, dn


def observer_parametrization(
    model: FinslerModel,
    x: np.ndarray,
    u: np.ndarray,
    chart: FiberChartKind = FiberChartKind.rapidity,
    frame: FiberFrame | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Unit observers xdot(u), Jacobians dxdot/du (n, 4, 3) and metrics g(x, xdot(u)).

    Accepts one chart point (shape (3,)) or many (shape (n, 3)).
    """
    x = np.asarray(x, dtype=float)
    frame = frame or FiberFrame.adapted(model, x)
    n, dn = _directions(frame, u, chart)
    inside = timelike_region_mask(model, x, n)
    if not np.all(inside):
        bad = np.atleast_2d(u)[~inside][0]
        raise ConeExit(f"Fiber chart point u = {bad} maps outside the timelike cone at x = {x}")
    L, g = model.value_and_metric(x, n)
    scale = L**-0.5
    # one Newton polish of L(x, scale n) = 1; the Jacobian uses the polished scale
    residual = model.lagrangian_values(x, n * scale[:, None]) - 1.0
    scale = scale * (1.0 - 0.5 * residual)
    xdot = n * scale[:, None]
    # d(n / sqrt(L(n))) = dn / sqrt(L) - n (L_{.i} dn^i) / (2 L^{3/2}), L_{.i} = 2 g_ij n^j
    dL = 2.0 * np.einsum("ni,nij,njk->nk", n, g, dn)
    jac = dn * scale[:, None, None] - 0.5 * np.einsum("ni,nk->nik", n, dL * scale[:, None] ** 3)
    return xdot, jac, g


def fiber_weight(
    model: FinslerModel,
    x: np.ndarray,
    u: np.ndarray,
    chart: FiberChartKind = FiberChartKind.rapidity,
    frame: FiberFrame | None = None,
) -> np.ndarray:
    """w(u) = |det g| |det[xdot, dxdot/du]| on the unit observer surface L = 1."""
    xdot, jac, g = observer_parametrization(model, x, u, chart, frame)
    columns = np.concatenate([xdot[:, :, None], jac], axis=-1)
    return np.abs(np.linalg.det(g)) * np.abs(np.linalg.det(columns))  # type: ignore[no-any-return]


def _gauss_nodes(config: QuadratureConfig) -> tuple[np.ndarray, np.ndarray]:
    upper = config.chi_max
    if config.chart is FiberChartKind.velocity:
        upper = float(np.tanh(config.chi_max))
    axes = []
    for order, (lo, hi) in zip(config.orders, [(0.0, upper), (0.0, np.pi), (0.0, 2.0 * np.pi)],
                               strict=True):
        t, w = roots_legendre(order)
        axes.append((0.5 * (hi - lo) * t + 0.5 * (hi + lo), 0.5 * (hi - lo) * w))
    grids = np.meshgrid(*(a[0] for a in axes), indexing="ij")
    wgrids = np.meshgrid(*(a[1] for a in axes), indexing="ij")
    nodes = np.stack([gr.ravel() for gr in grids], axis=-1)
    weights = wgrids[0].ravel() * wgrids[1].ravel() * wgrids[2].ravel()
    return nodes, weights


def build_fiber_quadrature(
    model: FinslerModel, x: np.ndarray, config: QuadratureConfig | None = None
) -> FiberQuadrature:
    """Tensor-product Gauss-Legendre rule on [0, chi_max] x [0, pi] x [0, 2 pi]."""
    config = config or QuadratureConfig()
    x = np.asarray(x, dtype=float)
    nodes, gauss = _gauss_nodes(config)
    frame = FiberFrame.adapted(model, x)
    try:
        xdot, jac, g = observer_parametrization(model, x, nodes, config.chart, frame)
    except ConeExit as exc:
        raise NodeOutsideCone(f"Quadrature node outside the timelike cone: {exc}") from exc
    columns = np.concatenate([xdot[:, :, None], jac], axis=-1)
    w = np.abs(np.linalg.det(g)) * np.abs(np.linalg.det(columns))
    logger.debug("Fiber rule at x = %s: %d nodes (%s chart)", x, len(nodes), config.chart)
    return FiberQuadrature(x=x, config=config, nodes=nodes, xdot=xdot, weights=gauss * w)


def _evaluate(f: FiberIntegrand, x: np.ndarray, X: np.ndarray, threads: int) -> np.ndarray:
    """f on the rows of X in ordered chunks; results concatenate in node order."""
    if threads <= 1 or len(X) < 2 * threads:
        return np.asarray(f(x, X), dtype=float)
    chunks = np.array_split(X, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda c: np.asarray(f(x, c), dtype=float), chunks))
    return np.concatenate(parts, axis=0)


def check_homogeneous(f: FiberIntegrand, quad: FiberQuadrature, threads: int = 1) -> None:
    """Reject integrands that change under xdot -> 2 xdot at the rule's nodes."""
    f1 = _evaluate(f, quad.x, quad.xdot, threads)
    f2 = _evaluate(f, quad.x, 2.0 * quad.xdot, threads)
    gap = np.abs(f2 - f1)
    if np.any(gap > HOMOGENEITY_TOL * np.maximum(1.0, np.abs(f1))):
        raise NonHomogeneousIntegrand(
            f"Integrand changes by up to {gap.max():.3g} under xdot -> 2 xdot"
        )


def _sum_rule(f: FiberIntegrand, quad: FiberQuadrature, threads: int) -> np.ndarray:
    values = _evaluate(f, quad.x, quad.xdot, threads)
    return np.tensordot(quad.weights, values, axes=(0, 0))


def integrate_observer_fiber(
    model: FinslerModel,
    x: np.ndarray,
    f: FiberIntegrand,
    quad: FiberQuadrature | QuadratureConfig | None = None,
    threads: int | None = None,
    check: bool = True,
) -> FiberIntegral:
    """Integral of a 0-homogeneous f over the observer fiber, with an error estimate.

    With ``error_estimate`` the value comes from the rule with doubled orders and
    the error is its distance to the base rule.
    """
    threads = threads or settings.threads
    if not isinstance(quad, FiberQuadrature):
        quad = build_fiber_quadrature(model, x, quad)
    if check:
        check_homogeneous(f, quad, threads)
    value = _sum_rule(f, quad, threads)
    error = np.zeros_like(value)
    nodes = len(quad)
    if quad.config.error_estimate:
        fine = build_fiber_quadrature(model, quad.x, quad.config.doubled())
        fine_value = _sum_rule(f, fine, threads)
        error = np.abs(fine_value - value)
        value = fine_value
        nodes += len(fine)
    logger.debug("Fiber integral at x = %s: max error %.3g", quad.x, float(np.max(error)))
    return FiberIntegral(value=value, error=error, nodes=nodes)
