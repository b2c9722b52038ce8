"""Numerical probes of the causal structure: admissibility, timelike cones, observers."""

import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from finsler_lab.catalog import FinslerModel
from finsler_lab.config import settings
from finsler_lab.errors import (
    DivisionNearZero,
    DomainError,
    NotTimelike,
    SeedNotTimelike,
    SqrtDomain,
)
from finsler_lab.jets import ChartPoint, TruncationOrder

logger = logging.getLogger(__name__)

LORENTZIAN_SIGNATURE = (1, -1, -1, -1)
CONVEXITY_WEIGHTS = np.round(np.arange(1, 10) / 10.0, 1)

_HESSIAN_ORDER = TruncationOrder(0, 2)
_GRADIENT_ORDER = TruncationOrder(0, 1)


class Region(enum.StrEnum):
    timelike = "timelike"
    spacelike_signed = "spacelike-signed"
    null_adjacent = "null-adjacent"
    inadmissible = "inadmissible"


@dataclass
class AdmissibilityReport:
    det_g: float
    signature: tuple[int, ...]
    is_admissible: bool
    L_value: float
    region: Region


@dataclass
class ConeProbe:
    """Outcome of a convexity probe; ``failures`` holds (u, v, alpha) triples."""

    x: np.ndarray
    seed_direction: np.ndarray
    samples: int
    failures: list[tuple[np.ndarray, np.ndarray, float]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def signature_of(g: np.ndarray) -> tuple[int, ...]:
    """Signs of the eigenvalues of a symmetric matrix, largest first."""
    eig = np.linalg.eigvalsh(0.5 * (g + g.T))[::-1]
    return tuple(int(s) for s in np.sign(eig))


def _nondegenerate(g: np.ndarray, tol_det: float) -> np.ndarray:
    det = np.linalg.det(g)
    scale = np.prod(np.linalg.norm(g, axis=-1), axis=-1)
    return np.abs(det) > tol_det * scale  # type: ignore[no-any-return]


def admissibility_report(
    model: FinslerModel,
    pt: ChartPoint,
    eps_div: float | None = None,
    tol_det: float | None = None,
) -> AdmissibilityReport:
    """Classify (x, xdot) into timelike, spacelike-signed, null-adjacent or inadmissible.

    Never raises for a bad point; a Lagrangian whose root or quotient
    degenerates along the direction is reported as null-adjacent.
    """
    eps_div = settings.eps_div if eps_div is None else eps_div
    tol_det = settings.tol_det if tol_det is None else tol_det
    nan_signature = (0, 0, 0, 0)
    try:
        L = model.lagrangian_jet(pt, _HESSIAN_ORDER)
    except DomainError as exc:
        region = Region.inadmissible
        if isinstance(exc.__cause__, SqrtDomain | DivisionNearZero):
            region = Region.null_adjacent
        logger.debug("No Lagrangian at %s: %s", pt, exc)
        return AdmissibilityReport(float("nan"), nan_signature, False, float("nan"), region)

    L0 = float(L.value)
    g = 0.5 * L.grad_v().grad_v().value
    det = float(np.linalg.det(g))
    admissible = bool(_nondegenerate(g, tol_det))
    signature = signature_of(g)

    if abs(L0) <= eps_div * float(L.magnitude()):
        region = Region.null_adjacent
    elif not admissible:
        region = Region.inadmissible
    elif L0 > 0.0 and signature == LORENTZIAN_SIGNATURE:
        region = Region.timelike
    else:
        region = Region.spacelike_signed
    return AdmissibilityReport(det, signature, admissible, L0, region)


def timelike_region_mask(
    model: FinslerModel,
    x: np.ndarray,
    V: np.ndarray,
    eps_div: float | None = None,
    tol_det: float | None = None,
) -> np.ndarray:
    """Per row of V: L > 0, g nondegenerate and of signature (+,-,-,-).

    Rows are evaluated as one batch; if any row leaves the smoothness domain the
    batch is bisected until the failing rows are isolated and counted as outside.
    """
    eps_div = settings.eps_div if eps_div is None else eps_div
    tol_det = settings.tol_det if tol_det is None else tol_det
    V = np.atleast_2d(np.asarray(V, dtype=float))
    norms = np.linalg.norm(V, axis=1)
    mask = norms > 0.0
    rows = np.flatnonzero(mask)
    if rows.size == 0:
        return mask
    try:
        L, g = model.value_and_metric(x, V[rows])
    except DomainError:
        if rows.size == 1:
            mask[rows] = False
            return mask
        half = rows.size // 2
        for part in (rows[:half], rows[half:]):
            mask[part] = timelike_region_mask(model, x, V[part], eps_div, tol_det)
        return mask
    eig = np.linalg.eigvalsh(0.5 * (g + np.swapaxes(g, -1, -2)))
    lorentzian = (np.sum(eig > 0.0, axis=-1) == 1) & (np.sum(eig < 0.0, axis=-1) == 3)
    positive = L > eps_div * np.maximum(1.0, norms[rows] ** 2)
    mask[rows] = positive & lorentzian & _nondegenerate(g, tol_det)
    return mask


def _unit_representative(model: FinslerModel, x: np.ndarray, v: np.ndarray) -> np.ndarray | None:
    try:
        L = model.lagrangian_values(x, v[None, :])[0]
    except DomainError:
        return None
    if not L > 0.0:
        return None
    return v / np.sqrt(L)  # type: ignore[no-any-return]


def _check_seed(model: FinslerModel, x: np.ndarray, seed: np.ndarray) -> np.ndarray:
    if not timelike_region_mask(model, x, seed[None, :])[0]:
        raise SeedNotTimelike(f"Seed direction {seed} is not timelike at x = {x}")
    unit = _unit_representative(model, x, seed)
    assert unit is not None
    return unit


def timelike_membership(
    model: FinslerModel,
    x: np.ndarray,
    v: np.ndarray,
    seed: np.ndarray | None = None,
    n_path: int | None = None,
) -> bool:
    """True iff the straight fiber path from the seed to v stays timelike.

    Both ends are first scaled to their L = 1 representatives, so the answer
    depends only on the ray of v.
    """
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    seed = model.seed if seed is None else np.asarray(seed, dtype=float)
    n_path = n_path or settings.n_path
    start = _check_seed(model, x, seed)
    end = _unit_representative(model, x, v)
    if end is None:
        return False
    t = np.linspace(0.0, 1.0, n_path)[:, None]
    path = (1.0 - t) * start + t * end
    inside = bool(np.all(timelike_region_mask(model, x, path)))
    logger.debug("Membership of %s at x = %s: %s", v, x, inside)
    return inside


def normalize_observer(
    model: FinslerModel, x: np.ndarray, v: np.ndarray, max_iter: int = 8
) -> np.ndarray:
    """alpha v with L(x, alpha v) = 1, alpha from L^{-1/2} polished by Newton."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    report = admissibility_report(model, ChartPoint.of(x, v))
    if report.region is not Region.timelike:
        raise NotTimelike(f"Direction {v} at x = {x} is {report.region}, not timelike")
    alpha = report.L_value**-0.5
    for _ in range(max_iter):
        L = model.lagrangian_jet(ChartPoint.of(x, alpha * v), _GRADIENT_ORDER)
        residual = float(L.value) - 1.0
        if abs(residual) <= 1e-15:
            break
        slope = float(L.grad_v().value @ v)
        alpha -= residual / slope
    return alpha * v  # type: ignore[no-any-return]


def sample_timelike(
    model: FinslerModel,
    x: np.ndarray,
    n: int,
    rng: np.random.Generator,
    spread: float = 0.6,
    max_rounds: int = 50,
) -> np.ndarray:
    """n unit representatives in the timelike cone around the seed, by rejection."""
    x = np.asarray(x, dtype=float)
    start = _check_seed(model, x, model.seed)
    found: list[np.ndarray] = []
    t = np.linspace(0.0, 1.0, settings.n_path)[:, None]
    for _ in range(max_rounds):
        cand = start + spread * rng.standard_normal((min(max(n, 16), 256), 4))
        ends = cand[timelike_region_mask(model, x, cand)]
        if len(ends) == 0:
            continue
        units = ends / np.sqrt(model.lagrangian_values(x, ends))[:, None]
        paths = (1.0 - t[None]) * start + t[None] * units[:, None, :]
        connected = timelike_region_mask(model, x, paths.reshape(-1, 4))
        connected = connected.reshape(len(units), -1).all(axis=1)
        found.extend(units[connected])
        if len(found) >= n:
            return np.array(found[:n])
    raise SeedNotTimelike(
        f"Found only {len(found)} of {n} timelike samples near the seed at x = {x}"
    )


def convexity_probe(
    model: FinslerModel,
    x: np.ndarray,
    n_pairs: int,
    rng: np.random.Generator | None = None,
) -> ConeProbe:
    """Check (1 - alpha) u + alpha v stays timelike for sampled pairs in the cone."""
    x = np.asarray(x, dtype=float)
    rng = rng or np.random.default_rng(settings.seed)
    samples = sample_timelike(model, x, 2 * n_pairs, rng)
    U, W = samples[:n_pairs], samples[n_pairs:]
    a = CONVEXITY_WEIGHTS[None, :, None]
    combos = (1.0 - a) * U[:, None, :] + a * W[:, None, :]
    inside = timelike_region_mask(model, x, combos.reshape(-1, 4)).reshape(n_pairs, -1)

    probe = ConeProbe(x=x, seed_direction=model.seed, samples=n_pairs)
    for i, j in zip(*np.nonzero(~inside), strict=True):
        probe.failures.append((U[i], W[i], float(CONVEXITY_WEIGHTS[j])))
    if probe.failures:
        logger.warning("Convexity probe at x = %s: %d violations", x, len(probe.failures))
    else:
        logger.info("Convexity probe at x = %s: %d pairs, no violations", x, n_pairs)
    return probe
