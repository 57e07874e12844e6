"""Heat, photon and per-bit energy budgets of the recording process.

Closed-form calculators for what a single absorbed pump pulse does
thermally: the film temperature rise, the deposited heat density, the
absorbed photon budget, and the dissipation attributable to one recorded
bit of given size. Inputs are the absorbed fraction a (dimensionless), the
pulse fluence I in mJ cm^-2 and the sample constants below; conversions to
SI come from the shared constants module. All four quantities are exactly
linear in a and in I.
"""

from __future__ import annotations

from dataclasses import dataclass

from .constants import EV_TO_JOULE, MJ_TO_J, NM3_TO_CM3


@dataclass(frozen=True)
class SampleThermo:
    """Thermal and optical constants of the film.

    thickness_cm   film thickness (7.5 um default)
    heat_capacity  J mol^-1 K^-1
    molar_mass     g mol^-1
    density        g cm^-3
    photon_energy_ev  pump photon energy (0.95 eV at the 1305 nm resonance)
    """

    thickness_cm: float = 7.5e-4
    heat_capacity: float = 430.0
    molar_mass: float = 706.0
    density: float = 7.12
    photon_energy_ev: float = 0.95

    def __post_init__(self):
        for name in ("thickness_cm", "heat_capacity", "molar_mass", "density", "photon_energy_ev"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


def temperature_rise(absorbed_fraction: float, fluence: float,
                     thermo: SampleThermo | None = None) -> float:
    """Film temperature increase in K: dT = a I m / (C d rho)."""
    thermo = thermo or SampleThermo()
    if not 0.0 <= absorbed_fraction <= 1.0:
        raise ValueError("absorbed fraction must lie in [0, 1]")
    joules_per_cm2 = absorbed_fraction * fluence * MJ_TO_J
    return joules_per_cm2 * thermo.molar_mass / (
        thermo.heat_capacity * thermo.thickness_cm * thermo.density
    )


def heat_density(absorbed_fraction: float, fluence: float, thickness_cm: float = 7.5e-4) -> float:
    """Deposited heat per unit volume in J cm^-3: a I / d."""
    if thickness_cm <= 0:
        raise ValueError("thickness must be positive")
    return absorbed_fraction * fluence * MJ_TO_J / thickness_cm


def photon_areal_density(absorbed_fraction: float, fluence: float,
                         photon_energy_ev: float = 0.95) -> float:
    """Absorbed photons per unit area in cm^-2: a I / (hbar omega)."""
    if photon_energy_ev <= 0:
        raise ValueError("photon energy must be positive")
    return absorbed_fraction * fluence * MJ_TO_J / (photon_energy_ev * EV_TO_JOULE)


def photon_volume_density(absorbed_fraction: float, fluence: float,
                          photon_energy_ev: float = 0.95,
                          thickness_cm: float = 7.5e-4) -> float:
    """Absorbed photons per unit volume in cm^-3 (areal density over d)."""
    return photon_areal_density(absorbed_fraction, fluence, photon_energy_ev) / thickness_cm


def bit_dissipation(heat_density_j_cm3: float, bit_dims_nm: tuple) -> float:
    """Heat attributable to one bit of the given nm dimensions, in aJ."""
    dx, dy, dz = bit_dims_nm
    if dx <= 0 or dy <= 0 or dz <= 0:
        raise ValueError("bit dimensions must be positive")
    volume_cm3 = dx * dy * dz * NM3_TO_CM3
    return heat_density_j_cm3 * volume_cm3 * 1e18
