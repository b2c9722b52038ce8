"""Geodesic integration and conservation monitors."""

from finsler_lab.geodesics.integrator import (
    GeodesicState,
    IntegratorConfig,
    IntegratorMethod,
    integrate_geodesic,
    rk4_step,
    spray_value,
)
from finsler_lab.geodesics.invariants import DriftReport, geodesic_invariants, hilbert_length

__all__ = [
    "DriftReport",
    "GeodesicState",
    "IntegratorConfig",
    "IntegratorMethod",
    "geodesic_invariants",
    "hilbert_length",
    "integrate_geodesic",
    "rk4_step",
    "spray_value",
]
