"""Field equations and the energy-momentum of kinetic gases."""

from finsler_lab.dynamics.energy_momentum import (
    BalanceReport,
    EnergyMomentumDensity,
    ThetaComponents,
    averaged_conservation_check,
    em_density,
    em_scalar_and_theta,
    liouville_residual,
    theta_divergence_and_balance,
)
from finsler_lab.dynamics.field import field_residual_kinetic, vacuum_scalar, vacuum_scalar_E
from finsler_lab.dynamics.gas import (
    GasSpec,
    KineticGas,
    OrbitalBump,
    RapidityBump,
    arccosh_sq_series,
    bump,
    build_gas,
)

__all__ = [
    "BalanceReport",
    "EnergyMomentumDensity",
    "GasSpec",
    "KineticGas",
    "OrbitalBump",
    "RapidityBump",
    "ThetaComponents",
    "arccosh_sq_series",
    "averaged_conservation_check",
    "build_gas",
    "bump",
    "em_density",
    "em_scalar_and_theta",
    "field_residual_kinetic",
    "liouville_residual",
    "theta_divergence_and_balance",
    "vacuum_scalar",
    "vacuum_scalar_E",
]
