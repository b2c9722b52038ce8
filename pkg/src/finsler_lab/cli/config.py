"""Run configuration: everything a subcommand needs, validated before any computation."""

import enum
import itertools
from pathlib import Path

import numpy as np
from pydantic import BaseModel, Field, PositiveInt, field_validator

from finsler_lab.catalog import ChartBox, ModelSpec
from finsler_lab.catalog.descriptors import Vector4, load_document, parse_model_spec
from finsler_lab.config import settings
from finsler_lab.dynamics import GasSpec
from finsler_lab.geodesics import IntegratorConfig
from finsler_lab.jets import ChartPoint, TruncationOrder
from finsler_lab.quadrature import QuadratureConfig


class Command(enum.StrEnum):
    inspect = "inspect"
    geodesic = "geodesic"
    fieldeq = "fieldeq"
    emtensor = "emtensor"
    quadrature = "quadrature"
    verify = "verify"


class OutputFormat(enum.StrEnum):
    json = "json"
    csv = "csv"


# trajectories and grids go to CSV, structured reports to JSON
DEFAULT_FORMAT: dict[Command, OutputFormat] = {
    Command.inspect: OutputFormat.json,
    Command.geodesic: OutputFormat.csv,
    Command.fieldeq: OutputFormat.csv,
    Command.emtensor: OutputFormat.json,
    Command.quadrature: OutputFormat.json,
    Command.verify: OutputFormat.json,
}


class PointEntry(BaseModel):
    """A chart point; a missing velocity means the model's seed direction."""

    model_config = {"frozen": True}

    x: Vector4
    v: Vector4 | None = None


class GridSpec(BaseModel):
    """Cartesian product of evenly spaced positions over a chart box (ends included)."""

    model_config = {"frozen": True}

    counts: tuple[PositiveInt, PositiveInt, PositiveInt, PositiveInt]
    box: ChartBox | None = None
    v: Vector4 | None = None

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """``"n0,n1,n2,n3"`` over the model's chart box."""
        parts = [p.strip() for p in text.split(",") if p.strip()]
        if len(parts) != 4:
            raise ValueError(f"Grid spec needs four counts, got {text!r}")
        return cls(counts=tuple(int(p) for p in parts))  # type: ignore[arg-type]

    def positions(self, box: ChartBox) -> list[np.ndarray]:
        box = self.box or box
        axes = []
        for lo, hi, n in zip(box.lower, box.upper, self.counts, strict=True):
            axes.append([0.5 * (lo + hi)] if n == 1 else list(np.linspace(lo, hi, n)))
        return [np.array(p) for p in itertools.product(*axes)]


class RunConfig(BaseModel):
    command: Command
    model: ModelSpec
    gas: GasSpec | None = None
    order: tuple[int, int] | None = None
    quadrature: QuadratureConfig = Field(default_factory=QuadratureConfig)
    integrator: IntegratorConfig = Field(default_factory=IntegratorConfig)
    points: list[PointEntry] = []
    grid: GridSpec | None = None
    out: Path | None = None
    format: OutputFormat | None = None
    seed: int = Field(default_factory=lambda: settings.seed)
    threads: PositiveInt = Field(default_factory=lambda: settings.threads)
    n_points: PositiveInt | None = None

    @field_validator("order")
    @classmethod
    def check_order(cls, v: tuple[int, int] | None) -> tuple[int, int] | None:
        if v is not None and min(v) < 0:
            raise ValueError(f"Truncation orders must be non-negative, got {v}")
        return v

    @property
    def truncation(self) -> TruncationOrder | None:
        return TruncationOrder(*self.order) if self.order is not None else None

    @property
    def output_format(self) -> OutputFormat:
        return self.format or DEFAULT_FORMAT[self.command]

    def chart_points(self, box: ChartBox, seed_direction: np.ndarray) -> list[ChartPoint]:
        """Explicit points first, then the grid, in a fixed order."""
        out = [
            ChartPoint.of(p.x, seed_direction if p.v is None else p.v) for p in self.points
        ]
        if self.grid is not None:
            v = seed_direction if self.grid.v is None else np.array(self.grid.v)
            out.extend(ChartPoint.of(x, v) for x in self.grid.positions(box))
        return out


def _vector(text: str) -> tuple[float, ...]:
    return tuple(float(s) for s in text.split(","))


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(s) for s in text.split(","))


def load_points(path: Path) -> list[PointEntry]:
    """A JSON/TOML document holding a list of {x, v} or a table with a ``points`` key."""
    doc = load_document(path)
    if isinstance(doc, dict):
        doc = doc.get("points", [])
    if not isinstance(doc, list):
        raise ValueError(f"{path}: expected a list of points")
    return [PointEntry.model_validate(p) for p in doc]


def build_run_config(command: str, options: dict[str, object]) -> RunConfig:
    """Merge an optional config document with command-line options (options win)."""
    data: dict[str, object] = {}
    if options.get("config") is not None:
        doc = load_document(Path(str(options["config"])))
        if not isinstance(doc, dict):
            raise ValueError("Run config document must be a table")
        data.update(doc)
    data["command"] = command
    if options.get("model") is not None:
        data["model"] = load_document(Path(str(options["model"])))
    if "model" in data:
        data["model"] = parse_model_spec(data["model"])
    if options.get("gas") is not None:
        data["gas"] = load_document(Path(str(options["gas"])))
    if options.get("points") is not None:
        data["points"] = load_points(Path(str(options["points"])))
    if options.get("x") is not None:
        points = list(data.get("points", []))  # type: ignore[call-overload]
        entry = PointEntry(x=_vector(str(options["x"])))  # type: ignore[arg-type]
        data["points"] = [*points, entry]
    if options.get("grid") is not None:
        data["grid"] = GridSpec.parse(str(options["grid"]))
    if options.get("order") is not None:
        data["order"] = _ints(str(options["order"]))
    for key in ("out", "format", "seed", "threads", "n_points"):
        if options.get(key) is not None:
            data[key] = options[key]
    integrator = dict(data.get("integrator", {}))  # type: ignore[call-overload]
    for key in ("method", "step", "span", "max_steps"):
        if options.get(key) is not None:
            integrator[key] = options[key]
    data["integrator"] = integrator
    quadrature = dict(data.get("quadrature", {}))  # type: ignore[call-overload]
    if options.get("chi_max") is not None:
        quadrature["chi_max"] = options["chi_max"]
    if options.get("orders") is not None:
        quadrature["orders"] = _ints(str(options["orders"]))
    data["quadrature"] = quadrature
    return RunConfig.model_validate(data)
