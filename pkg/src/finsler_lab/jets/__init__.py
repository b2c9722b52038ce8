"""Truncated multivariate Taylor arithmetic over (x, xdot)."""

from finsler_lab.jets.basis import DIM, JetBasis, MultiIndex, TruncationOrder, jet_basis
from finsler_lab.jets.ops import (
    JetOp,
    extract_partial,
    jet_arith,
    seed_batch,
    seed_chart_jet,
    seed_vectors,
)
from finsler_lab.jets.point import AnyPoint, ChartBatch, ChartPoint, batch_ndim
from finsler_lab.jets.value import EPS_DIV, JetValue, jet_einsum, stack

__all__ = [
    "DIM",
    "EPS_DIV",
    "AnyPoint",
    "ChartBatch",
    "ChartPoint",
    "JetBasis",
    "JetOp",
    "JetValue",
    "MultiIndex",
    "TruncationOrder",
    "batch_ndim",
    "extract_partial",
    "jet_arith",
    "jet_basis",
    "jet_einsum",
    "seed_batch",
    "seed_chart_jet",
    "seed_vectors",
    "stack",
]
