"""Admissibility, timelike cones and observers."""

from finsler_lab.causal.cone import (
    LORENTZIAN_SIGNATURE,
    AdmissibilityReport,
    ConeProbe,
    Region,
    admissibility_report,
    convexity_probe,
    normalize_observer,
    sample_timelike,
    signature_of,
    timelike_membership,
    timelike_region_mask,
)

__all__ = [
    "LORENTZIAN_SIGNATURE",
    "AdmissibilityReport",
    "ConeProbe",
    "Region",
    "admissibility_report",
    "convexity_probe",
    "normalize_observer",
    "sample_timelike",
    "signature_of",
    "timelike_membership",
    "timelike_region_mask",
]
