"""Model descriptors: the JSON/TOML schema of the catalog.

Descriptors are plain data; ``build_model`` turns them into evaluable models.
"""

import json
import math
import tomllib
from pathlib import Path
from typing import Annotated, Literal

import numpy as np
from pydantic import BaseModel, Field, PositiveFloat, TypeAdapter, field_validator, model_validator

from finsler_lab.catalog.expressions import Coefficient, Rational, constant
from finsler_lab.errors import OutsideDomain
from finsler_lab.jets import JetValue

Vector4 = tuple[float, float, float, float]


class ChartBox(BaseModel):
    """Axis-aligned box in x used for seeded sampling of evaluation points."""

    model_config = {"frozen": True}

    lower: Vector4
    upper: Vector4

    @model_validator(mode="after")
    def check_bounds(self) -> "ChartBox":
        if any(lo > hi for lo, hi in zip(self.lower, self.upper, strict=True)):
            raise ValueError(f"Chart box lower {self.lower} exceeds upper {self.upper}")
        return self

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (np.array(self.lower) + np.array(self.upper))

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.uniform(self.lower, self.upper, size=(n, 4))


# -- base metrics ----------------------------------------------------------


class MinkowskiMetric(BaseModel):
    model_config = {"frozen": True}

    kind: Literal["minkowski"] = "minkowski"

    def default_box(self) -> ChartBox:
        return ChartBox(lower=(-1.0, -1.0, -1.0, -1.0), upper=(1.0, 1.0, 1.0, 1.0))

    def diagonal(self, x: np.ndarray) -> np.ndarray:
        return np.array([1.0, -1.0, -1.0, -1.0])

    def diagonal_jet(self, x: list[JetValue]) -> list[JetValue]:
        return [JetValue.constant(c, x[0].order, x[0].point) for c in (1.0, -1.0, -1.0, -1.0)]


class SchwarzschildMetric(BaseModel):
    """Exterior Schwarzschild in (t, r, theta, phi)."""

    model_config = {"frozen": True}

    kind: Literal["schwarzschild"] = "schwarzschild"
    mass: PositiveFloat = 1.0

    def default_box(self) -> ChartBox:
        m = self.mass
        return ChartBox(
            lower=(0.0, 4.0 * m, 0.3, 0.0),
            upper=(1.0, 20.0 * m, math.pi - 0.3, 2.0 * math.pi),
        )

    def check_domain(self, x: np.ndarray) -> None:
        r, theta = x[1], x[2]
        if r <= 2.0 * self.mass:
            raise OutsideDomain(f"Schwarzschild chart needs r > 2M, got r = {r}")
        if not 0.1 < theta < math.pi - 0.1:
            raise OutsideDomain(f"theta = {theta} too close to the axis")

    def diagonal(self, x: np.ndarray) -> np.ndarray:
        self.check_domain(x)
        f = 1.0 - 2.0 * self.mass / x[1]
        r2 = x[1] ** 2
        return np.array([f, -1.0 / f, -r2, -r2 * math.sin(x[2]) ** 2])

    def diagonal_jet(self, x: list[JetValue]) -> list[JetValue]:
        self.check_domain(np.array([float(c.value) for c in x]))
        r = x[1]
        f = 1.0 - 2.0 * self.mass * r.reciprocal()
        r2 = r * r
        s = x[2].sin()
        return [f, -f.reciprocal(), -r2, -(r2 * s * s)]


class UserDiagonalMetric(BaseModel):
    """diag(a_00(x), ..., a_33(x)) with rational entries."""

    model_config = {"frozen": True}

    kind: Literal["user_diagonal"] = "user_diagonal"
    diagonal_entries: list[Coefficient] = Field(min_length=4, max_length=4)

    def default_box(self) -> ChartBox:
        return ChartBox(lower=(0.5, -1.0, -1.0, -1.0), upper=(2.0, 1.0, 1.0, 1.0))

    def diagonal(self, x: np.ndarray) -> np.ndarray:
        return np.array([c(x) for c in self.diagonal_entries])

    def diagonal_jet(self, x: list[JetValue]) -> list[JetValue]:
        return [c.jet(x) for c in self.diagonal_entries]


BaseMetricSpec = Annotated[
    MinkowskiMetric | SchwarzschildMetric | UserDiagonalMetric, Field(discriminator="kind")
]


class OneFormSpec(BaseModel):
    """b = b_i(x) dx^i."""

    model_config = {"frozen": True}

    components: list[Coefficient] = Field(min_length=4, max_length=4)

    @classmethod
    def of_constants(cls, b: Vector4 | list[float]) -> "OneFormSpec":
        return cls(components=[constant(float(c)) for c in b])

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return np.array([c(x) for c in self.components])

    def jet(self, x: list[JetValue]) -> list[JetValue]:
        return [c.jet(x) for c in self.components]


# -- models ----------------------------------------------------------------


class _ModelSpecBase(BaseModel):
    model_config = {"frozen": True}

    # fiducial timelike direction pinning the future cone component
    seed: Vector4 = (1.0, 0.0, 0.0, 0.0)
    chart_box: ChartBox | None = None

    @field_validator("seed")
    @classmethod
    def check_seed(cls, v: Vector4) -> Vector4:
        if not any(v):
            raise ValueError("Seed direction must be nonzero")
        return v


class LorentzianSpec(_ModelSpecBase):
    kind: Literal["lorentzian"] = "lorentzian"
    base_metric: BaseMetricSpec = MinkowskiMetric()


class RandersSpec(_ModelSpecBase):
    kind: Literal["randers"] = "randers"
    base_metric: BaseMetricSpec = MinkowskiMetric()
    one_form: OneFormSpec


class BogoslovskySpec(_ModelSpecBase):
    kind: Literal["bogoslovsky"] = "bogoslovsky"
    base_metric: BaseMetricSpec = MinkowskiMetric()
    one_form: OneFormSpec
    q: float


class MthRootTerm(BaseModel):
    """coefficient(x) * prod_k (xdot^k)^powers_k."""

    model_config = {"frozen": True}

    coefficient: Coefficient
    powers: tuple[int, int, int, int]


class MthRootSpec(_ModelSpecBase):
    """G(xdot, ..., xdot) as a homogeneous polynomial of degree m."""

    kind: Literal["mth_root"] = "mth_root"
    m: int = Field(ge=2)
    terms: list[MthRootTerm] = Field(min_length=1)

    @model_validator(mode="after")
    def check_degrees(self) -> "MthRootSpec":
        for term in self.terms:
            if min(term.powers) < 0 or sum(term.powers) != self.m:
                raise ValueError(f"Term powers {term.powers} are not of degree m = {self.m}")
        return self


class FhatSpec(BaseModel):
    """Positive-definite Randers-type norm sqrt(h(xdot, xdot)) + c(xdot), h diagonal."""

    model_config = {"frozen": True}

    metric: list[Coefficient] = Field(
        default_factory=lambda: [constant(1.0) for _ in range(4)], min_length=4, max_length=4
    )
    one_form: OneFormSpec = OneFormSpec.of_constants((0.0, 0.0, 0.0, 0.0))


class SignatureReversedSpec(_ModelSpecBase):
    """L = omega(xdot)^2 - Fhat(xdot)^2."""

    kind: Literal["signature_reversed"] = "signature_reversed"
    omega: OneFormSpec
    fhat: FhatSpec = FhatSpec()


ModelSpec = Annotated[
    LorentzianSpec | RandersSpec | BogoslovskySpec | MthRootSpec | SignatureReversedSpec,
    Field(discriminator="kind"),
]

model_spec_adapter: TypeAdapter[ModelSpec] = TypeAdapter(ModelSpec)


def parse_model_spec(data: object) -> ModelSpec:
    return model_spec_adapter.validate_python(data)


def load_document(path: Path) -> object:
    """Read a JSON or TOML document (by suffix)."""
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".toml":
        return tomllib.loads(text)
    return json.loads(text)


def load_model_spec(path: Path) -> ModelSpec:
    return parse_model_spec(load_document(path))


__all__ = [
    "BaseMetricSpec",
    "BogoslovskySpec",
    "ChartBox",
    "FhatSpec",
    "LorentzianSpec",
    "MinkowskiMetric",
    "ModelSpec",
    "MthRootSpec",
    "MthRootTerm",
    "OneFormSpec",
    "RandersSpec",
    "Rational",
    "SchwarzschildMetric",
    "SignatureReversedSpec",
    "UserDiagonalMetric",
    "load_document",
    "load_model_spec",
    "parse_model_spec",
]
