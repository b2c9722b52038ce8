"""Polynomial and rational coefficient functions of the position x."""

from collections.abc import Sequence
from typing import Annotated, Any

import numpy as np
from pydantic import BaseModel, BeforeValidator, field_validator

from finsler_lab.errors import InvalidParameter
from finsler_lab.jets import JetValue

# [coefficient, [p0, p1, p2, p3]] for coefficient * prod_k (x^k)^p_k
Term = tuple[float, tuple[int, int, int, int]]


class Rational(BaseModel):
    """numerator(x) / denominator(x), both sums of monomials in x."""

    model_config = {"frozen": True}

    numerator: list[Term]
    denominator: list[Term] = [(1.0, (0, 0, 0, 0))]

    @field_validator("numerator", "denominator")
    @classmethod
    def check_powers(cls, v: list[Term]) -> list[Term]:
        for _, powers in v:
            if min(powers) < 0:
                raise ValueError(f"Monomial powers must be non-negative, got {powers}")
        return v

    @field_validator("denominator")
    @classmethod
    def check_denominator(cls, v: list[Term]) -> list[Term]:
        if not v:
            raise ValueError("Denominator needs at least one term")
        return v

    @property
    def is_polynomial(self) -> bool:
        return self.denominator == [(1.0, (0, 0, 0, 0))]

    def __call__(self, x: Sequence[float] | np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        den = _poly_value(self.denominator, x)
        if den == 0.0:
            raise InvalidParameter(f"Denominator vanishes at x = {x}")
        return _poly_value(self.numerator, x) / den

    def jet(self, x: Sequence[JetValue]) -> JetValue:
        """The function composed with position jets x^0..x^3."""
        num = _poly_jet(self.numerator, x)
        if self.is_polynomial:
            return num
        return num / _poly_jet(self.denominator, x)


def _poly_value(terms: list[Term], x: np.ndarray) -> float:
    return float(sum(c * np.prod(x ** np.array(p)) for c, p in terms))


def _poly_jet(terms: list[Term], x: Sequence[JetValue]) -> JetValue:
    powers: dict[tuple[int, int], JetValue] = {}
    out = JetValue.constant(0.0, x[0].order, x[0].point)
    for coef, p in terms:
        mono: JetValue | float = coef
        for k, e in enumerate(p):
            if e == 0:
                continue
            if (k, e) not in powers:
                powers[(k, e)] = x[k] ** e
            mono = powers[(k, e)] * mono
        out = out + mono
    return out


def _coerce(v: Any) -> Any:
    """Accept a bare number or a monomial list as shorthand."""
    if isinstance(v, int | float):
        return {"numerator": [(float(v), (0, 0, 0, 0))]}
    if isinstance(v, list):
        return {"numerator": v}
    return v


Coefficient = Annotated[Rational, BeforeValidator(_coerce)]


def constant(c: float) -> Rational:
    return Rational(numerator=[(c, (0, 0, 0, 0))])
