"""Catalog of Finsler Lagrangians: descriptors, models and the model factory."""

import logging

import numpy as np

from finsler_lab.catalog.base import FinslerModel
from finsler_lab.catalog.descriptors import (
    BogoslovskySpec,
    ChartBox,
    FhatSpec,
    LorentzianSpec,
    MinkowskiMetric,
    ModelSpec,
    MthRootSpec,
    MthRootTerm,
    OneFormSpec,
    RandersSpec,
    SchwarzschildMetric,
    SignatureReversedSpec,
    UserDiagonalMetric,
    load_model_spec,
    parse_model_spec,
)
from finsler_lab.catalog.expressions import Rational
from finsler_lab.config import settings
from finsler_lab.jets import ChartPoint, JetValue, TruncationOrder

logger = logging.getLogger(__name__)


def _create_model(spec: ModelSpec) -> FinslerModel:
    """Factory: instantiate the model class for the descriptor kind."""
    if isinstance(spec, LorentzianSpec):
        from finsler_lab.catalog.lorentzian import LorentzianModel

        return LorentzianModel(spec)
    if isinstance(spec, RandersSpec):
        from finsler_lab.catalog.randers import RandersModel

        return RandersModel(spec)
    if isinstance(spec, BogoslovskySpec):
        from finsler_lab.catalog.bogoslovsky import BogoslovskyModel

        return BogoslovskyModel(spec)
    if isinstance(spec, MthRootSpec):
        from finsler_lab.catalog.mth_root import MthRootModel

        return MthRootModel(spec)
    if isinstance(spec, SignatureReversedSpec):
        from finsler_lab.catalog.signature_reversed import SignatureReversedModel

        return SignatureReversedModel(spec)
    raise TypeError(f"Unknown model descriptor {type(spec).__name__}")


def build_model(
    spec: ModelSpec | dict[str, object], seed: int | None = None, n_samples: int | None = None
) -> FinslerModel:
    """Validate a descriptor and build the model.

    Structural conditions (e.g. the Randers norm bound) are sampled at
    ``n_samples`` seeded chart points.
    """
    if isinstance(spec, dict):
        spec = parse_model_spec(spec)
    model = _create_model(spec)
    rng = np.random.default_rng(settings.seed if seed is None else seed)
    model.validate_parameters(rng, n_samples or settings.sample_count)
    logger.info("Model built: %s", model.kind)
    return model


def lagrangian_jet(
    model: FinslerModel, pt: ChartPoint, order: TruncationOrder | None = None
) -> JetValue:
    return model.lagrangian_jet(pt, order)


__all__ = [
    "BogoslovskySpec",
    "ChartBox",
    "FhatSpec",
    "FinslerModel",
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
    "build_model",
    "lagrangian_jet",
    "load_model_spec",
    "parse_model_spec",
]
