"""The geometric tower of a Finsler Lagrangian, stage by stage, in jet arithmetic.

Every function works on single points and on velocity batches: tensor indices
are spelled out, a leading batch axis (if any) rides on the ellipsis.
"""

import logging
import string
from dataclasses import dataclass

import numpy as np

from finsler_lab.config import settings
from finsler_lab.errors import DegenerateHessian, NullDirection
from finsler_lab.jets import DIM, JetValue, batch_ndim, jet_einsum, seed_vectors

logger = logging.getLogger(__name__)

# tensor index letters; "Z" is reserved by jet_einsum, "m" for summation
_LETTERS = [c for c in string.ascii_lowercase if c not in "mk"]


@dataclass(frozen=True)
class FundamentalTensors:
    """Hilbert form, metric and Cartan tensor with their companions."""

    L: JetValue
    epsilon: np.ndarray
    xdot: JetValue
    g: JetValue
    g_value: np.ndarray
    g_inv: JetValue
    g_inv_value: np.ndarray
    det_g: JetValue
    C: JetValue
    C_trace: JetValue
    F: JetValue
    omega: JetValue
    ell: JetValue


def tensor_rank(T: JetValue) -> int:
    return T.ndim - batch_ndim(T.point)


def xdot_jet(L: JetValue) -> JetValue:
    """The velocity seed vector at L's point and order."""
    return seed_vectors(L.point, L.order)[1]


def fundamental_tensors(
    L: JetValue, eps_div: float | None = None, tol_det: float | None = None
) -> FundamentalTensors:
    """g = L_{.i.j}/2, C = L_{.i.j.k}/4, F = sqrt|L|, omega = F_{.i}, ell = xdot/F."""
    eps_div = settings.eps_div if eps_div is None else eps_div
    tol_det = settings.tol_det if tol_det is None else tol_det

    L0 = L.value
    if np.any(np.abs(L0) <= eps_div * L.magnitude()):
        raise NullDirection(f"|L| = {np.abs(L0).min():.3g} at {L.point} is below threshold")

    g = 0.5 * L.grad_v().grad_v()
    g0 = g.value
    det0 = np.linalg.det(g0)
    row_scale = np.prod(np.linalg.norm(g0, axis=-1), axis=-1)
    if np.any(np.abs(det0) <= tol_det * row_scale):
        raise DegenerateHessian(f"det g = {det0} at {L.point} is below tolerance")

    # LU with partial pivoting at the value level
    g_inv0 = np.linalg.solve(g0, np.broadcast_to(np.eye(DIM), g0.shape))
    delta = g - g0
    g_inv = _inverse_jet(g_inv0, delta)
    det_g = _determinant_jet(det0, g_inv0, delta)

    C = 0.5 * g.grad_v()
    C_trace = jet_einsum("...jk,...ijk->...i", g_inv, C)

    F = L.signed_abs(eps_div).sqrt(eps_div)
    omega = F.grad_v()
    xdot = xdot_jet(L)
    ell = xdot * F.reciprocal(eps_div)[..., None]
    return FundamentalTensors(
        L=L,
        epsilon=np.sign(L0),
        xdot=xdot,
        g=g,
        g_value=g0,
        g_inv=g_inv,
        g_inv_value=g_inv0,
        det_g=det_g,
        C=C,
        C_trace=C_trace,
        F=F,
        omega=omega,
        ell=ell,
    )


def _inverse_jet(g_inv0: np.ndarray, delta: JetValue) -> JetValue:
    """g^-1 from X = g0^-1 - g0^-1 (g - g0) X; each pass fixes one more degree."""
    X = JetValue.constant(g_inv0, delta.order, delta.point)
    for _ in range(delta.order.total):
        X = g_inv0 - jet_einsum("...ih,...hk,...kj->...ij", g_inv0, delta, X)
    return X


def _determinant_jet(det0: np.ndarray, g_inv0: np.ndarray, delta: JetValue) -> JetValue:
    """det g = det g0 exp(tr log(1 + g0^-1 (g - g0)))."""
    M = jet_einsum("...ih,...hj->...ij", g_inv0, delta)
    power = M
    trace_log = jet_einsum("...ii->...", M)
    for k in range(2, delta.order.total + 1):
        power = jet_einsum("...ih,...hj->...ij", power, M)
        trace_log = trace_log + jet_einsum("...ii->...", power) * ((-1.0) ** (k + 1) / k)
    return det0 * trace_log.exp()


def spray_and_connection(L: JetValue, g_inv: JetValue) -> tuple[JetValue, JetValue]:
    """G^i = g^ih (L_{.h,j} xdot^j - L_{,h}) / 4 and N^i_j = G^i_{.j}."""
    xdot = xdot_jet(L)
    mixed = L.grad_v().grad_x()
    Y = jet_einsum("...hj,...j->...h", mixed, xdot) - L.grad_x()
    G = 0.25 * jet_einsum("...ih,...h->...i", g_inv, Y)
    return G, G.grad_v()


def horizontal(T: JetValue, N: JetValue) -> JetValue:
    """delta_k T = d_k T - N^m_k dot-d_m T, as a new trailing index k."""
    idx = "".join(_LETTERS[: tensor_rank(T)])
    transport = jet_einsum(f"...{idx}m,...mk->...{idx}k", T.grad_v(), N)
    return T.grad_x() - transport


def curvature_and_ricci(L: JetValue, N: JetValue) -> tuple[JetValue, JetValue]:
    """R^i_jk = delta_k N^i_j - delta_j N^i_k and R0 = R^i_ik xdot^k / L."""
    dN = horizontal(N, N)
    R = dN - dN.swapaxes(-1, -2)
    R0 = jet_einsum("...iik,...k->...", R, xdot_jet(L)) / L
    return R, R0


def chern_rund_and_landsberg(
    g: JetValue, g_inv: JetValue, N: JetValue
) -> tuple[JetValue, JetValue, JetValue]:
    """Gamma^i_jk = g^ih (delta_k g_hj + delta_j g_hk - delta_h g_jk) / 2,
    P^i_jk = N^i_{j.k} - Gamma^i_jk and P_i = P^j_ij."""
    dg = horizontal(g, N)
    lowered = 0.5 * (
        dg + jet_einsum("...hkj->...hjk", dg) - jet_einsum("...jkh->...hjk", dg)
    )
    Gamma = jet_einsum("...ih,...hjk->...ijk", g_inv, lowered)
    P = N.grad_v() - Gamma
    P_trace = jet_einsum("...jij->...i", P)
    return Gamma, P, P_trace


def covariant_derivative(
    T: JetValue, kinds: str, N: JetValue, Gamma: JetValue, xdot: JetValue
) -> tuple[JetValue, JetValue]:
    """Horizontal covariant derivative T_{|k} (new trailing index) and nabla T = xdot^k T_{|k}.

    ``kinds`` has one letter per tensor index of T: "u" upper, "d" lower.
    """
    rank = tensor_rank(T)
    if len(kinds) != rank or set(kinds) - {"u", "d"}:
        raise ValueError(f"Index kinds {kinds!r} do not describe a rank-{rank} tensor")
    letters = _LETTERS[:rank]
    idx = "".join(letters)
    out = horizontal(T, N)
    for p, kind in enumerate(kinds):
        summed = idx[:p] + "m" + idx[p + 1 :]
        if kind == "u":
            out = out + jet_einsum(f"...{letters[p]}mk,...{summed}->...{idx}k", Gamma, T)
        else:
            out = out - jet_einsum(f"...m{letters[p]}k,...{summed}->...{idx}k", Gamma, T)
    nabla = jet_einsum(f"...{idx}k,...k->...{idx}", out, xdot)
    return out, nabla
