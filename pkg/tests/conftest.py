import json

import numpy as np
import pytest

from photomag import landscape
from photomag.magnetics import FilmFrame, MaterialParams
from photomag.photoexcitation import PumpPulse, SpectralModel, calibrate_threshold, spectral_response

TARGET_IMIN = 34.0
CAL_WAVELENGTH = 1300.0

# canonical operating amplitudes of the frozen model (erg cm^-3); see the
# dynamics tests for how they were established
TOGGLE_AMPLITUDE = -17750.0     # center of the simultaneous L+/S- switching window
FAST_AMPLITUDE = -25500.0       # fast, clean L+ -> L- transit (rise-time demos)


@pytest.fixture(scope="session")
def params():
    return MaterialParams()


@pytest.fixture(scope="session")
def frame(params):
    return FilmFrame.from_params(params)


@pytest.fixture(scope="session")
def minima(params, frame):
    return landscape.find_minima(params, frame)


@pytest.fixture(scope="session")
def by_label(minima):
    return landscape.minima_by_label(minima)


@pytest.fixture(scope="session")
def spectral():
    return SpectralModel()


@pytest.fixture(scope="session")
def coupling(request, params, frame, spectral):
    """Session-calibrated fluence-to-anisotropy coupling (cached on disk)."""
    key = "photomag/coupling/" + json.dumps(
        [params.k1, params.ku, params.four_pi_ms, params.alpha, params.gamma,
         params.miscut_deg, params.miscut_azimuth_deg, TARGET_IMIN, CAL_WAVELENGTH],
        sort_keys=True)
    cached = request.config.cache.get(key, None)
    if cached is not None:
        return float(cached)
    value = calibrate_threshold(params, frame, target_imin=TARGET_IMIN,
                                wavelength_nm=CAL_WAVELENGTH, model=spectral)
    request.config.cache.set(key, value)
    return value


def pulse_for_amplitude(coupling, amplitude, phi_deg=0.0, wavelength_nm=CAL_WAVELENGTH):
    """Pulse whose t=0 photo amplitude equals the requested value."""
    fluence = abs(amplitude) / (coupling * spectral_response(wavelength_nm))
    return PumpPulse(fluence=fluence, wavelength_nm=wavelength_nm,
                     polarization_angle_deg=phi_deg, coupling_at_reference=coupling)


@pytest.fixture(scope="session")
def toggle_pulse_fluence(coupling):
    """Fluence placing the pulse at the center of the toggling window."""
    return abs(TOGGLE_AMPLITUDE) / (coupling * spectral_response(CAL_WAVELENGTH))


def random_unit_vectors(n, seed=0):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)
