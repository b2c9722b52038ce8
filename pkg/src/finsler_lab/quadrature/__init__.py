"""Integration of 0-homogeneous functions over observer-space fibers."""

from finsler_lab.quadrature.fiber import (
    FiberChartKind,
    FiberFrame,
    FiberIntegral,
    FiberIntegrand,
    FiberQuadrature,
    QuadratureConfig,
    build_fiber_quadrature,
    check_homogeneous,
    fiber_weight,
    integrate_observer_fiber,
    observer_parametrization,
)

__all__ = [
    "FiberChartKind",
    "FiberFrame",
    "FiberIntegral",
    "FiberIntegrand",
    "FiberQuadrature",
    "QuadratureConfig",
    "build_fiber_quadrature",
    "check_homogeneous",
    "fiber_weight",
    "integrate_observer_fiber",
    "observer_parametrization",
]
