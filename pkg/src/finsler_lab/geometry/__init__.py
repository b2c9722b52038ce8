"""Metric, spray, nonlinear connection, curvature and Chern-Rund data of a Finsler Lagrangian."""

from finsler_lab.geometry.bundle import QUANTITIES, GeometryBundle
from finsler_lab.geometry.core import (
    FundamentalTensors,
    chern_rund_and_landsberg,
    covariant_derivative,
    curvature_and_ricci,
    fundamental_tensors,
    horizontal,
    spray_and_connection,
)

__all__ = [
    "QUANTITIES",
    "FundamentalTensors",
    "GeometryBundle",
    "chern_rund_and_landsberg",
    "covariant_derivative",
    "curvature_and_ricci",
    "fundamental_tensors",
    "horizontal",
    "spray_and_connection",
]
