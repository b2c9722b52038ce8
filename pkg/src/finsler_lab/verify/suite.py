"""The default verification suite: seeded points, checks in parallel, merged reports."""

import logging
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from finsler_lab.catalog import FinslerModel
from finsler_lab.causal import Region, admissibility_report, sample_timelike
from finsler_lab.config import settings
from finsler_lab.dynamics import (
    GasSpec,
    KineticGas,
    build_gas,
    em_scalar_and_theta,
    vacuum_scalar_E,
)
from finsler_lab.errors import FinslerLabError, SeedNotTimelike
from finsler_lab.jets import ChartPoint
from finsler_lab.verify.checks import (
    REDUCTION_ORDER,
    contact_and_divergence_checks,
    euler_suite,
    identity_suite,
    lorentzian_reduction,
)
from finsler_lab.verify.oracle import fd_oracle_compare
from finsler_lab.verify.report import CheckReport

logger = logging.getLogger(__name__)

# FD stencils are costly; the oracle runs on a prefix of the sampled points
FD_POINTS = 10
_MAX_DRAWS = 50


def sample_points(
    model: FinslerModel, n: int, seed: int | None = None
) -> list[ChartPoint]:
    """n seeded admissible, non-null points in the model's chart box.

    Velocities are drawn from the timelike cone around the seed direction and
    rescaled by a random factor in [0.5, 2]. Models whose seed is not timelike
    fall back to rejection sampling on admissibility.
    """
    rng = np.random.default_rng(settings.seed if seed is None else seed)
    box = model.chart_box
    points: list[ChartPoint] = []
    rejected = 0
    for _ in range(_MAX_DRAWS * max(n, 1)):
        if len(points) == n:
            break
        x = box.sample(rng, 1)[0]
        scale = rng.uniform(0.5, 2.0)
        try:
            v = sample_timelike(model, x, 1, rng)[0]
        except SeedNotTimelike:
            v = model.seed + 0.3 * rng.standard_normal(4)
        pt = ChartPoint.of(x, scale * v)
        region = admissibility_report(model, pt).region
        if region in (Region.timelike, Region.spacelike_signed):
            points.append(pt)
        else:
            rejected += 1
    if rejected:
        logger.warning("%s: rejected %d inadmissible or null sample points", model.kind, rejected)
    if len(points) < n:
        raise SeedNotTimelike(f"{model.kind}: found only {len(points)} of {n} admissible points")
    return points


def _point_checks(
    model: FinslerModel, gas: KineticGas, points: list[ChartPoint]
) -> list[CheckReport]:
    extra: dict[str, tuple[Callable[[ChartPoint], float | np.ndarray], int]] = {
        "E": (lambda pt: vacuum_scalar_E(model, pt, REDUCTION_ORDER), 0),
        "T_frak": (lambda pt: em_scalar_and_theta(model, gas, pt).T_frak, 0),
    }
    reports = euler_suite(model, points, extra=extra)  # type: ignore[arg-type]
    reports += identity_suite(model, points)
    reports += contact_and_divergence_checks(model, points)
    if model.is_lorentzian and model.base_metric is not None:
        reports.append(lorentzian_reduction(model, points))
    return reports


def default_suite(
    model: FinslerModel,
    n_points: int | None = None,
    seed: int | None = None,
    threads: int | None = None,
    gas: GasSpec | None = None,
) -> list[CheckReport]:
    """Every pointwise check plus the FD oracle on seeded points.

    Points are split into ``threads`` contiguous chunks; reports are merged
    in chunk order, so the result does not depend on the thread count.
    """
    n = n_points or settings.sample_count
    seed = settings.seed if seed is None else seed
    threads = threads or settings.threads
    points = sample_points(model, n, seed)
    kinetic = build_gas(gas or GasSpec(), model)
    chunks = [list(c) for c in np.array_split(np.arange(n), min(threads, n)) if len(c)]
    groups = [[points[i] for i in c] for c in chunks]

    def run(group: list[ChartPoint]) -> list[CheckReport]:
        return _point_checks(model, kinetic, group)

    if len(groups) == 1:
        per_chunk = [run(groups[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(groups)) as pool:
            per_chunk = list(pool.map(run, groups))
    reports = [CheckReport.merge(list(parts)) for parts in zip(*per_chunk, strict=True)]

    oracle = []
    for pt in points[:FD_POINTS]:
        try:
            oracle.append(fd_oracle_compare(model, pt))
        except FinslerLabError as exc:
            logger.warning("FD oracle skipped at %s: %s", pt, exc)
    if oracle:
        reports.append(CheckReport.merge(oracle))

    for r in reports:
        r.details["seed"] = float(seed)
    passed = sum(r.passed for r in reports)
    logger.info("Suite for %s finished: %d of %d checks passed", model.kind, passed, len(reports))
    return reports
