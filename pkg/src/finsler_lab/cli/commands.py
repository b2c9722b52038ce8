"""Subcommands and the exit-code contract of the command line.

Exit codes: 0 success, 1 configuration error, 2 computation error (the
offending point is logged), 3 a requested check failed.
"""

import argparse
import contextlib
import logging
from collections.abc import Callable, Iterator
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from finsler_lab.catalog import FinslerModel, build_model
from finsler_lab.causal import Region, admissibility_report
from finsler_lab.cli.config import Command, OutputFormat, RunConfig, build_run_config
from finsler_lab.cli.output import emit_report
from finsler_lab.dynamics import (
    KineticGas,
    averaged_conservation_check,
    build_gas,
    em_density,
    field_residual_kinetic,
    vacuum_scalar_E,
)
from finsler_lab.errors import EmptyReport, FinslerLabError
from finsler_lab.geodesics import GeodesicState, geodesic_invariants, integrate_geodesic
from finsler_lab.geometry import GeometryBundle
from finsler_lab.jets import ChartPoint
from finsler_lab.quadrature import integrate_observer_fiber
from finsler_lab.verify import default_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_COMPUTATION = 2
EXIT_CHECK_FAILED = 3


class UsageError(ValueError):
    """Bad command-line usage."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


@dataclass
class RunContext:
    cfg: RunConfig
    model: FinslerModel
    gas: KineticGas | None
    points: list[ChartPoint]


Rows = list[dict[str, object]]
Handler = Callable[[RunContext], tuple[Rows, bool]]


@contextlib.contextmanager
def _offending(where: object) -> Iterator[None]:
    try:
        yield
    except FinslerLabError as exc:
        logger.error("Computation failed at %s: %s", where, exc)
        raise


def _coords(pt: ChartPoint) -> dict[str, object]:
    row: dict[str, object] = {f"x{i}": float(c) for i, c in enumerate(pt.x)}
    row.update({f"v{i}": float(c) for i, c in enumerate(pt.v)})
    return row


def _positions(points: list[ChartPoint]) -> list[np.ndarray]:
    """Distinct positions in first-seen order."""
    seen: dict[tuple[float, ...], np.ndarray] = {}
    for pt in points:
        seen.setdefault(pt.x, pt.x_array)
    return list(seen.values())


# -- handlers ---------------------------------------------------------------


def _inspect(ctx: RunContext) -> tuple[Rows, bool]:
    rows: Rows = []
    for pt in ctx.points:
        with _offending(pt):
            report = admissibility_report(ctx.model, pt)
            row = _coords(pt)
            row["region"] = str(report.region)
            scalars: dict[str, float | None] = dict.fromkeys(("L", "F", "det_g", "R0"))
            if report.region in (Region.timelike, Region.spacelike_signed):
                scalars.update(GeometryBundle(ctx.model, pt, ctx.cfg.truncation).scalars())
            row.update(scalars)
        rows.append(row)
    return rows, True


def _geodesic(ctx: RunContext) -> tuple[Rows, bool]:
    start = ctx.points[0]
    with _offending(start):
        state0 = GeodesicState(0.0, start.x_array, start.v_array)
        trajectory = integrate_geodesic(ctx.model, state0, ctx.cfg.integrator)
    drift = geodesic_invariants(trajectory, ctx.model)
    logger.info("Geodesic drift: max %.3g over %d states", drift.max_drift, len(trajectory))
    rows: Rows = []
    for state in trajectory:
        row: dict[str, object] = {"s": float(state.s)}
        row.update({f"x{i}": float(c) for i, c in enumerate(state.x)})
        row.update({f"v{i}": float(c) for i, c in enumerate(state.v)})
        row["L"] = ctx.model.lagrangian_value(state.x, state.v)
        rows.append(row)
    return rows, True


def _fieldeq(ctx: RunContext) -> tuple[Rows, bool]:
    rows: Rows = []
    for pt in ctx.points:
        with _offending(pt):
            row = _coords(pt)
            row["E"] = vacuum_scalar_E(ctx.model, pt, ctx.cfg.truncation)
            if ctx.gas is not None:
                row["phi"] = ctx.gas.phi(pt.x_array, pt.v_array)
                row["residual"] = field_residual_kinetic(
                    ctx.model, ctx.gas, pt, ctx.cfg.truncation
                )
        rows.append(row)
    return rows, True


def _emtensor(ctx: RunContext) -> tuple[Rows, bool]:
    if ctx.gas is None:
        raise UsageError("emtensor needs a gas descriptor (--gas)")
    rows: Rows = []
    for x in _positions(ctx.points):
        with _offending(x):
            density = em_density(ctx.model, ctx.gas, x, ctx.cfg.quadrature, ctx.cfg.threads)
            balance = averaged_conservation_check(
                ctx.model, ctx.gas, x, ctx.cfg.quadrature, ctx.cfg.threads
            )
        rows.append(
            {
                "x": x,
                "density": density.density,
                "density_error": density.error,
                "tensor": density.tensor,
                "conservation": balance.value,
                "conservation_error": balance.error,
            }
        )
    return rows, True


def _quadrature(ctx: RunContext) -> tuple[Rows, bool]:
    gas = ctx.gas
    if gas is not None:
        integrand, name = gas.phi_values, "phi"
    else:
        integrand, name = (lambda x, X: np.ones(len(X))), "one"
    rows: Rows = []
    for x in _positions(ctx.points):
        with _offending(x):
            result = integrate_observer_fiber(
                ctx.model, x, integrand, ctx.cfg.quadrature, threads=ctx.cfg.threads
            )
        row: dict[str, object] = {f"x{i}": float(c) for i, c in enumerate(x)}
        row.update(
            {
                "integrand": name,
                "value": float(result.value),
                "error": float(result.error),
                "nodes": result.nodes,
            }
        )
        rows.append(row)
    return rows, True


def _verify(ctx: RunContext) -> tuple[Rows, bool]:
    cfg = ctx.cfg
    reports = default_suite(ctx.model, cfg.n_points, cfg.seed, cfg.threads, cfg.gas)
    failed = [r.name for r in reports if not r.passed]
    if failed:
        logger.error("Failed checks: %s", ", ".join(failed))
    return [r.as_dict() for r in reports], not failed


HANDLERS: dict[Command, Handler] = {
    Command.inspect: _inspect,
    Command.geodesic: _geodesic,
    Command.fieldeq: _fieldeq,
    Command.emtensor: _emtensor,
    Command.quadrature: _quadrature,
    Command.verify: _verify,
}

# subcommands that evaluate at user points and cannot run without them
_NEEDS_POINTS = {
    Command.inspect,
    Command.geodesic,
    Command.fieldeq,
    Command.emtensor,
    Command.quadrature,
}


# -- argument parsing -------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", type=Path, help="run config document (JSON/TOML)")
    common.add_argument("--model", type=Path, help="model descriptor (JSON/TOML)")
    common.add_argument("--gas", type=Path, help="gas descriptor (JSON/TOML)")
    common.add_argument("--points", type=Path, help="list of {x, v} points")
    common.add_argument("--grid", help="grid counts n0,n1,n2,n3 over the chart box")
    common.add_argument("--x", help="one position x0,x1,x2,x3 (seed velocity)")
    common.add_argument("--order", help="truncation orders kx,kv")
    common.add_argument("--out", type=Path, help="output file (default stdout)")
    common.add_argument("--format", choices=[f.value for f in OutputFormat])
    common.add_argument("--seed", type=int)
    common.add_argument("--threads", type=int)
    common.add_argument("--n-points", dest="n_points", type=int)
    common.add_argument("--method", choices=["rk4", "rk45"])
    common.add_argument("--step", type=float)
    common.add_argument("--span", type=float)
    common.add_argument("--max-steps", dest="max_steps", type=int)
    common.add_argument("--chi-max", dest="chi_max", type=float)
    common.add_argument("--orders", help="Gauss orders n_chi,n_theta,n_phi")

    parser = _Parser(prog="finsler-lab", description="Numerical laboratory for Finsler spacetimes")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for command in Command:
        sub.add_parser(command.value, parents=[common])
    return parser


def _prepare(argv: list[str]) -> RunContext:
    args = build_parser().parse_args(argv)
    options = {k: v for k, v in vars(args).items() if k != "command"}
    cfg = build_run_config(args.command, options)
    model = build_model(cfg.model, seed=cfg.seed)
    gas = build_gas(cfg.gas, model) if cfg.gas is not None else None
    points = cfg.chart_points(model.chart_box, model.seed)
    if cfg.command in _NEEDS_POINTS and not points:
        raise UsageError(f"{cfg.command} needs --points, --grid or --x")
    return RunContext(cfg, model, gas, points)


def run_command(argv: list[str]) -> int:
    """Run one subcommand; returns the process exit code."""
    try:
        ctx = _prepare(argv)
    except (ValidationError, ValueError, OSError) as exc:
        logger.error("Configuration error: %s", exc)
        return EXIT_CONFIG
    logger.info("Running %s on %s", ctx.cfg.command, ctx.model.kind)
    try:
        rows, ok = HANDLERS[ctx.cfg.command](ctx)
    except UsageError as exc:
        logger.error("Configuration error: %s", exc)
        return EXIT_CONFIG
    except FinslerLabError as exc:
        logger.error("Computation error: %s", exc)
        return EXIT_COMPUTATION
    try:
        emit_report(rows, ctx.cfg.output_format, ctx.cfg.out, str(ctx.cfg.command))
    except (EmptyReport, OSError, ValueError) as exc:
        logger.error("Cannot write report: %s", exc)
        return EXIT_CONFIG
    return EXIT_OK if ok else EXIT_CHECK_FAILED
