"""Verification: homogeneity audits, identities, classical oracles and the FD oracle."""

from finsler_lab.verify.checks import (
    contact_and_divergence_checks,
    divergence_test_function,
    euler_suite,
    homogeneity_check,
    identity_suite,
    lorentzian_reduction,
)
from finsler_lab.verify.classical import ClassicalGeometry
from finsler_lab.verify.oracle import fd_geodesic, fd_oracle_compare, fd_partials, fd_spray
from finsler_lab.verify.report import CheckReport
from finsler_lab.verify.suite import default_suite, sample_points

__all__ = [
    "CheckReport",
    "ClassicalGeometry",
    "contact_and_divergence_checks",
    "default_suite",
    "divergence_test_function",
    "euler_suite",
    "fd_geodesic",
    "fd_oracle_compare",
    "fd_partials",
    "fd_spray",
    "homogeneity_check",
    "identity_suite",
    "lorentzian_reduction",
    "sample_points",
]
