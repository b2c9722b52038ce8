"""Homogeneity audits, the identity block, Lorentzian reduction and contact/divergence checks.

Residuals are made scale-free by dividing by max(1, |reference|), so large
values are compared relatively and small ones absolutely.
"""

import logging
from collections.abc import Callable, Sequence

import numpy as np

from finsler_lab.catalog import FinslerModel
from finsler_lab.config import settings
from finsler_lab.errors import ModelNotLorentzian
from finsler_lab.geometry import QUANTITIES, GeometryBundle, horizontal
from finsler_lab.jets import ChartPoint, JetValue, TruncationOrder, jet_einsum, seed_vectors
from finsler_lab.verify.classical import ClassicalGeometry
from finsler_lab.verify.report import CheckReport

logger = logging.getLogger(__name__)

IDENTITY_ORDER = TruncationOrder(1, 4)
REDUCTION_ORDER = TruncationOrder(2, 6)
DEFAULT_TOL = 1e-8
REDUCTION_TOL = 1e-6

Selector = Callable[[ChartPoint], JetValue | np.ndarray | float]


def _scaled(residual: np.ndarray, *refs: np.ndarray | float) -> np.ndarray:
    scale = max([1.0, *(float(np.max(np.abs(r))) for r in refs)])
    return np.abs(residual) / scale  # type: ignore[no-any-return]


def homogeneity_check(
    selector: Selector,
    expected_degree: int,
    points: Sequence[ChartPoint],
    name: str = "homogeneity",
    tolerance: float = DEFAULT_TOL,
) -> CheckReport:
    """max |xdot^i dot-d_i Q - k Q| over components and points.

    A jet-valued selector is audited with the Euler operator; a plain value is
    audited by rescaling, Q(x, 2 xdot) against 2^k Q(x, xdot).
    """
    residuals = []
    for pt in points:
        Q = selector(pt)
        if isinstance(Q, JetValue):
            value, euler = Q.value, Q.euler_value()
            residuals.append(_scaled(euler - expected_degree * value, value, euler))
        else:
            Q1 = np.asarray(Q, dtype=float)
            Q2 = np.asarray(selector(pt.scaled(2.0)), dtype=float)
            residuals.append(_scaled(Q2 - 2.0**expected_degree * Q1, Q1))
    report = CheckReport.of(f"{name} (degree {expected_degree})", residuals, tolerance)
    logger.debug("%s: max residual %.3g", report.name, report.max_abs_residual)
    return report


def identity_suite(
    model: FinslerModel,
    points: Sequence[ChartPoint],
    order: TruncationOrder | None = None,
    tolerance: float = DEFAULT_TOL,
) -> list[CheckReport]:
    """Residuals of the identities satisfied by L, g and xdot under the Chern-Rund connection."""
    order = order or IDENTITY_ORDER
    names = [
        "delta_i L = 0",
        "g_ij|k = 0",
        "xdot^i_|j = 0",
        "nabla L = 0",
        "nabla g_ij = 0",
        "nabla xdot^i = 0",
        "P^i_jk xdot^k = 0",
        "P_i xdot^i = 0",
    ]
    residuals: dict[str, list[np.ndarray]] = {n: [] for n in names}
    for pt in points:
        b = GeometryBundle(model, pt, order)
        L0, g0, v0 = b.L.value, b.g.value, b.xdot.value
        dL = horizontal(b.L, b.N).value
        g_bar, g_nabla = b.covariant(b.g, "dd")
        v_bar, v_nabla = b.covariant(b.xdot, "u")
        P = b.P.value
        rows = [
            _scaled(dL, L0),
            _scaled(g_bar.value, g0),
            _scaled(v_bar.value, v0),
            _scaled(dL @ v0, L0),
            _scaled(g_nabla.value, g0),
            _scaled(v_nabla.value, v0),
            _scaled(np.einsum("ijk,k->ij", P, v0), P),
            _scaled(b.P_trace.value @ v0, P),
        ]
        for n, r in zip(names, rows, strict=True):
            residuals[n].append(r)
    return [CheckReport.of(n, residuals[n], tolerance) for n in names]


def lorentzian_reduction(
    model: FinslerModel,
    points: Sequence[ChartPoint],
    order: TruncationOrder | None = None,
    tolerance: float = REDUCTION_TOL,
) -> CheckReport:
    """Jet geometry of a Lorentzian model against the classical oracle.

    Compares g^ij (L R0)_{.i.j} with -2 r, N^i_j with gamma^i_jk xdot^k and
    R^i_jk with r^i_lkj xdot^l.
    """
    if not model.is_lorentzian or model.base_metric is None:
        raise ModelNotLorentzian(f"Model {model.kind} has no Lorentzian metric to compare with")
    order = order or REDUCTION_ORDER
    contraction, connection, curvature, ricci = [], [], [], []
    for pt in points:
        b = GeometryBundle(model, pt, order)
        classical = ClassicalGeometry.at(model.base_metric, pt.x_array)
        v = pt.v_array
        LR0 = (b.L * b.R0).grad_v().grad_v().value
        lhs = float(np.einsum("ij,ij->", b.fundamental.g_inv_value, LR0))
        r = classical.ricci_scalar
        contraction.append(_scaled(np.array(lhs + 2.0 * r), r))
        N = b.N.value
        connection.append(_scaled(N - classical.connection(v), N))
        R = b.R.value
        curvature.append(_scaled(R - classical.curvature(v), R))
        # R0 = -r_lk xdot^l xdot^k / L
        R0 = float(b.R0.value)
        expected = -classical.ricci_form(v) / float(b.L.value)
        ricci.append(_scaled(np.array(R0 - expected), expected))
    details = {
        "ricci_contraction": float(np.max(contraction)) if contraction else 0.0,
        "connection": float(np.max(connection)) if connection else 0.0,
        "curvature": float(np.max(curvature)) if curvature else 0.0,
        "R0": float(np.max(ricci)) if ricci else 0.0,
    }
    report = CheckReport.of(
        "lorentzian_reduction", [*contraction, *connection, *curvature, *ricci], tolerance, details
    )
    report.samples = len(points)
    logger.info("Lorentzian reduction: %s", details)
    return report


def divergence_test_function(X: JetValue, V: JetValue, L: JetValue) -> JetValue:
    """f = (1 + 0.3 x^1 - 0.2 x^2 x^3) (1 + 0.25 xdot^1 xdot^2 / L), 0-homogeneous."""
    spatial = 1.0 + 0.3 * X[1] - 0.2 * (X[2] * X[3])
    directional = 1.0 + 0.25 * (V[..., 1] * V[..., 2]) / L
    return spatial * directional


_VERTICAL_FIELD = np.array([0.3, 1.0, -0.5, 0.2])


def contact_and_divergence_checks(
    model: FinslerModel,
    points: Sequence[ChartPoint],
    order: TruncationOrder | None = None,
    tolerance: float = DEFAULT_TOL,
) -> list[CheckReport]:
    """Reeb conditions for l = xdot / F and the divergence formulas on timelike points.

    The divergence of a horizontal field f l^i delta_i equals l^i delta_i f; the
    coordinate checks recompute both divergence formulas from the density
    rho = |det g| / L^2.
    """
    order = order or IDENTITY_ORDER
    reeb_norm, reeb_contract, nabla, horiz, vert = [], [], [], [], []
    for pt in points:
        b = GeometryBundle(model, pt, order)
        f = b.fundamental
        ell, omega = f.ell.value, f.omega.value
        eps = float(f.epsilon)
        reeb_norm.append(np.array(omega @ ell - 1.0))
        contraction = (eps * f.g_value - np.outer(omega, omega)) @ ell
        reeb_contract.append(_scaled(contraction, f.g_value))

        X_jets, V_jets = seed_vectors(pt, order)
        fn = divergence_test_function(X_jets, V_jets, b.L)
        X = f.ell * fn[..., None]
        X_bar, _ = b.covariant(X, "u")
        div_closed = jet_einsum("...ii->...", X_bar).value - b.P_trace.value @ X.value
        along = ell @ horizontal(fn, b.N).value
        nabla.append(_scaled(np.array(div_closed - along), along))

        rho = f.det_g.signed_abs() / (b.L * b.L)
        rho_X = X * rho[..., None]
        flow = jet_einsum("...i,...ji->...j", rho_X, b.N)
        coord = (
            jet_einsum("...ii->...", rho_X.grad_x()).value
            - jet_einsum("...jj->...", flow.grad_v()).value
        ) / rho.value
        horiz.append(_scaled(np.array(coord - div_closed), div_closed))

        Y = fn[..., None] * _VERTICAL_FIELD
        rho_Y = Y * rho[..., None]
        coord_v = jet_einsum("...ii->...", rho_Y.grad_v()).value / rho.value
        Y0 = Y.value
        closed_v = (
            jet_einsum("...ii->...", Y.grad_v()).value
            + 2.0 * f.C_trace.value @ Y0
            - 4.0 / float(b.L.value) * (Y0 @ (f.g_value @ f.xdot.value))
        )
        vert.append(_scaled(np.array(coord_v - closed_v), closed_v))
    return [
        CheckReport.of("reeb: omega_i l^i = 1", reeb_norm, tolerance),
        CheckReport.of("reeb: (eps g_ij - F_.i F_.j) l^j = 0", reeb_contract, tolerance),
        CheckReport.of("divergence: div(f l) = l^i delta_i f", nabla, tolerance),
        CheckReport.of("divergence: horizontal coordinate form", horiz, tolerance),
        CheckReport.of("divergence: vertical coordinate form", vert, tolerance),
    ]


def euler_suite(
    model: FinslerModel,
    points: Sequence[ChartPoint],
    order: TruncationOrder | None = None,
    extra: dict[str, tuple[Selector, int]] | None = None,
    tolerance: float = DEFAULT_TOL,
) -> list[CheckReport]:
    """homogeneity_check for every bundle entry, plus caller-supplied quantities."""
    order = order or settings.truncation_order()
    bundles: dict[ChartPoint, GeometryBundle] = {}

    def bundle(pt: ChartPoint) -> GeometryBundle:
        if pt not in bundles:
            bundles[pt] = GeometryBundle(model, pt, order)
        return bundles[pt]

    reports = []
    for name, degree in QUANTITIES.items():
        reports.append(
            homogeneity_check(
                lambda pt, n=name: bundle(pt).quantity(n), degree, points, name, tolerance
            )
        )
    for name, (selector, degree) in (extra or {}).items():
        reports.append(homogeneity_check(selector, degree, points, name, tolerance))
    return reports
