"""Macrospin simulator for polarization-controlled photo-magnetic switching.

Models a garnet film with competing cubic and uniaxial anisotropy whose
eight metastable magnetization states can be toggled by the transient
anisotropy written by a single linearly polarized pump pulse. Provides the
energy landscape, Landau-Lifshitz-Gilbert dynamics, pump calibration,
symmetry analysis of the photo-magnetic tensor, heating/energy budgets and
a per-pixel imaging layer, all tied together by a CLI.
"""

__version__ = "0.1.0"

from .magnetics import (
    FilmFrame,
    MaterialParams,
    PhotoAnisotropyState,
    cubic_energy,
    demag_energy,
    effective_field,
    photo_anisotropy_energy,
    total_energy,
    uniaxial_energy,
    zeeman_energy,
)
from .landscape import Equilibrium, classify, find_minima, fmr_frequency
from .dynamics import (
    SwitchOutcome,
    Trajectory,
    fit_rise_time,
    integrate,
    llg_rhs,
    relax_in_field,
    simulate_switch,
)
from .photoexcitation import (
    PumpPulse,
    SpectralModel,
    absorption_coeff,
    calibrate_threshold,
    photo_amplitude,
    spectral_response,
)
from .symmetry import ChiTensor, PointGroup, group_elements, project_tensor, switching_energy
from .energetics import (
    SampleThermo,
    bit_dissipation,
    heat_density,
    photon_areal_density,
    temperature_rise,
)
from .imaging import BeamProfile, DomainImage, gaussian_fluence, normalized_switched_area
from .config import RunConfig, config_hash, parse_config, serialize_config

__all__ = [
    "BeamProfile",
    "ChiTensor",
    "DomainImage",
    "Equilibrium",
    "FilmFrame",
    "MaterialParams",
    "PhotoAnisotropyState",
    "PointGroup",
    "PumpPulse",
    "RunConfig",
    "SampleThermo",
    "SpectralModel",
    "SwitchOutcome",
    "Trajectory",
    "absorption_coeff",
    "bit_dissipation",
    "calibrate_threshold",
    "classify",
    "config_hash",
    "cubic_energy",
    "demag_energy",
    "effective_field",
    "find_minima",
    "fit_rise_time",
    "fmr_frequency",
    "gaussian_fluence",
    "group_elements",
    "heat_density",
    "integrate",
    "llg_rhs",
    "normalized_switched_area",
    "parse_config",
    "photo_amplitude",
    "photo_anisotropy_energy",
    "photon_areal_density",
    "project_tensor",
    "relax_in_field",
    "serialize_config",
    "simulate_switch",
    "spectral_response",
    "switching_energy",
    "temperature_rise",
    "total_energy",
    "uniaxial_energy",
    "zeeman_energy",
]
