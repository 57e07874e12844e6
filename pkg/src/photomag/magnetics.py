"""Magnetization state, material parameters and the free-energy model.

Units are CGS-Gaussian throughout: energy densities in erg cm^-3, magnetic
fields in Oe, magnetization in emu cm^-3 (4*pi*Ms given in G). The reduced
magnetization m = M/Ms is a unit 3-vector; all energy terms are polynomials
in its components so they extend smoothly off the sphere, which the
integrator and the finite-difference checks rely on.

Sign conventions (important, since only the constants are conventional):

* cubic term      E = K1 * (mx^2 my^2 + my^2 mz^2 + mz^2 mx^2), minima on
  <111> body diagonals for K1 < 0;
* uniaxial term   E = -Ku * (m . u)^2, so a negative Ku penalizes
  magnetization along the axis u (in-plane preference for a film normal);
* Zeeman term     E = -Ms * (m . H);
* thin-film shape term E = 2 pi Ms^2 (m . n)^2, optional (off by default);
* photo-induced term  E = A * cos(2 phi) * mx * my, the transient
  anisotropy written by a linearly polarized pump at angle phi from [100].

The effective field is H_eff = -(1/Ms) dE/dm, with no tangential projection
(radial components drop out of m x H automatically).

Vectorized: every function accepts m of shape (..., 3) and broadcasts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import FOUR_PI, GAMMA_DEFAULT

UNIT_NORM_TOL = 1e-6


def unit_vector(v) -> np.ndarray:
    """Return v / |v| as a float array. Raises on zero vectors."""
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v, axis=-1, keepdims=True)
    if np.any(norm == 0.0):
        raise ValueError("cannot normalize a zero vector")
    return v / norm


def check_unit(v, name: str = "m", tol: float = UNIT_NORM_TOL) -> np.ndarray:
    """Validate that v is a unit vector (within tol) and return it as an array."""
    v = np.asarray(v, dtype=float)
    if v.shape[-1] != 3:
        raise ValueError(f"{name} must be a 3-vector, got shape {v.shape}")
    err = np.abs(np.linalg.norm(v, axis=-1) - 1.0)
    if np.any(err > tol):
        raise ValueError(f"{name} must be a unit vector (|{name}| - 1 = {float(np.max(err)):.3e})")
    return v


@dataclass(frozen=True)
class MaterialParams:
    """Material constants of the garnet film.

    k1, ku            anisotropy constants, erg cm^-3
    four_pi_ms        4*pi*Ms in G (Ms derived from it)
    alpha             Gilbert damping, dimensionless
    gamma             gyromagnetic ratio, rad s^-1 Oe^-1
    miscut_deg        tilt of the film normal away from [001], degrees
    miscut_azimuth_deg  in-plane direction of that tilt, measured from [100]
                      towards [010] (90 = towards [010], the default; see
                      FilmFrame for why)
    include_demag     enable the thin-film shape term (off by default; the
                      measured ku of such films normally absorbs it)
    neel_temperature_k  metadata only, never used in dynamics
    """

    k1: float = -8.4e3
    ku: float = -2.5e3
    four_pi_ms: float = 90.0
    alpha: float = 0.2
    gamma: float = GAMMA_DEFAULT
    miscut_deg: float = 4.0
    miscut_azimuth_deg: float = 90.0
    include_demag: bool = False
    neel_temperature_k: float = 445.0

    def __post_init__(self):
        if self.four_pi_ms <= 0:
            raise ValueError("four_pi_ms must be positive")
        if self.alpha < 0:
            raise ValueError("alpha must be non-negative")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if not 0.0 <= self.miscut_deg < 90.0:
            raise ValueError("miscut_deg must be in [0, 90)")

    @property
    def ms(self) -> float:
        """Saturation magnetization in emu cm^-3."""
        return self.four_pi_ms / FOUR_PI


@dataclass(frozen=True)
class FilmFrame:
    """Film geometry: the (possibly miscut) film normal and the uniaxial axis.

    Both default to the same tilted normal; the cubic axes stay locked to the
    crystal. The tilt azimuth is measured in the (001) plane from [100]
    towards [010]. The default azimuth is 90 deg (tilt towards [010]): with
    the sign conventions above this is the tilt direction for which an
    in-plane field along [1-10] prepares the large-domain "up" state and a
    field along [110] the large-domain "down" state, i.e. the documented
    preparation protocol comes out right.
    """

    film_normal: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))
    uniaxial_axis: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))

    def __post_init__(self):
        object.__setattr__(self, "film_normal", check_unit(self.film_normal, "film_normal"))
        object.__setattr__(self, "uniaxial_axis", check_unit(self.uniaxial_axis, "uniaxial_axis"))

    @classmethod
    def from_miscut(cls, miscut_deg: float, azimuth_deg: float = 90.0) -> "FilmFrame":
        """Normal = [001] rotated by miscut_deg towards the in-plane azimuth."""
        t = math.radians(miscut_deg)
        a = math.radians(azimuth_deg)
        n = np.array([math.sin(t) * math.cos(a), math.sin(t) * math.sin(a), math.cos(t)])
        return cls(film_normal=n, uniaxial_axis=n.copy())

    @classmethod
    def from_params(cls, params: MaterialParams) -> "FilmFrame":
        return cls.from_miscut(params.miscut_deg, params.miscut_azimuth_deg)

    def __eq__(self, other):
        if not isinstance(other, FilmFrame):
            return NotImplemented
        return np.array_equal(self.film_normal, other.film_normal) and np.array_equal(
            self.uniaxial_axis, other.uniaxial_axis
        )


@dataclass(frozen=True)
class PhotoAnisotropyState:
    """Instantaneous photo-induced anisotropy.

    amplitude is the prefactor A of E = A cos(2 phi) mx my in erg cm^-3
    (coupling and pump intensity folded into one scalar; negative for the
    switching sense observed with pump polarization along [100]).
    polarization_angle_deg is phi, from [100] in the (001) plane.

    For batched dynamics `amplitude` may be an array broadcasting against
    the leading axes of m.
    """

    amplitude: float | np.ndarray = 0.0
    polarization_angle_deg: float = 0.0

    @property
    def cos2phi(self) -> float:
        return math.cos(2.0 * math.radians(self.polarization_angle_deg))


# ---------------------------------------------------------------------------
# energy terms
# ---------------------------------------------------------------------------

def cubic_energy(m, k1: float, check: bool = True):
    """Cubic magnetocrystalline anisotropy energy density, erg cm^-3.

    E = K1 (mx^2 my^2 + my^2 mz^2 + mz^2 mx^2); minimal on <111> if K1 < 0.
    """
    m = check_unit(m) if check else np.asarray(m, dtype=float)
    x2, y2, z2 = m[..., 0] ** 2, m[..., 1] ** 2, m[..., 2] ** 2
    return k1 * (x2 * y2 + y2 * z2 + z2 * x2)


def uniaxial_energy(m, axis, ku: float, check: bool = True):
    """Uniaxial anisotropy energy density E = -Ku (m . axis)^2, erg cm^-3."""
    if check:
        m = check_unit(m)
        axis = check_unit(axis, "axis")
    else:
        m = np.asarray(m, dtype=float)
        axis = np.asarray(axis, dtype=float)
    proj = m @ axis
    return -ku * proj**2


def zeeman_energy(m, h_applied, ms: float, check: bool = True):
    """Zeeman energy density E = -Ms (m . H), erg cm^-3 for H in Oe."""
    m = check_unit(m) if check else np.asarray(m, dtype=float)
    h = np.asarray(h_applied, dtype=float)
    return -ms * (m @ h)


def demag_energy(m, film_normal, ms: float, check: bool = True):
    """Thin-film shape anisotropy energy density 2 pi Ms^2 (m . n)^2 >= 0."""
    if check:
        m = check_unit(m)
        film_normal = check_unit(film_normal, "film_normal")
    else:
        m = np.asarray(m, dtype=float)
        film_normal = np.asarray(film_normal, dtype=float)
    proj = m @ film_normal
    return 2.0 * math.pi * ms**2 * proj**2


def photo_anisotropy_energy(m, state: PhotoAnisotropyState, check: bool = True):
    """Transient photo-induced anisotropy energy density A cos(2 phi) mx my."""
    m = check_unit(m) if check else np.asarray(m, dtype=float)
    return state.amplitude * state.cos2phi * m[..., 0] * m[..., 1]


def total_energy(
    m,
    params: MaterialParams,
    frame: FilmFrame,
    h_applied=None,
    photo_state: PhotoAnisotropyState | None = None,
    check: bool = True,
):
    """Sum of all enabled free-energy terms, erg cm^-3."""
    m = check_unit(m) if check else np.asarray(m, dtype=float)
    e = cubic_energy(m, params.k1, check=False)
    e = e + uniaxial_energy(m, frame.uniaxial_axis, params.ku, check=False)
    if params.include_demag:
        e = e + demag_energy(m, frame.film_normal, params.ms, check=False)
    if h_applied is not None:
        e = e + zeeman_energy(m, h_applied, params.ms, check=False)
    if photo_state is not None:
        e = e + photo_anisotropy_energy(m, photo_state, check=False)
    return e


# ---------------------------------------------------------------------------
# analytic derivatives
# ---------------------------------------------------------------------------

def energy_gradient(
    m,
    params: MaterialParams,
    frame: FilmFrame,
    h_applied=None,
    photo_state: PhotoAnisotropyState | None = None,
):
    """dE/dm of total_energy, treating m as a free 3-vector. Shape (..., 3)."""
    m = np.asarray(m, dtype=float)
    x, y, z = m[..., 0], m[..., 1], m[..., 2]
    x2, y2, z2 = x * x, y * y, z * z

    g = np.empty_like(m)
    g[..., 0] = 2.0 * params.k1 * x * (y2 + z2)
    g[..., 1] = 2.0 * params.k1 * y * (z2 + x2)
    g[..., 2] = 2.0 * params.k1 * z * (x2 + y2)

    u = frame.uniaxial_axis
    g += (-2.0 * params.ku * (m @ u))[..., None] * u

    if params.include_demag:
        n = frame.film_normal
        g += (4.0 * math.pi * params.ms**2 * (m @ n))[..., None] * n

    if h_applied is not None:
        g -= params.ms * np.asarray(h_applied, dtype=float)

    if photo_state is not None:
        a = np.asarray(photo_state.amplitude * photo_state.cos2phi)
        g[..., 0] += a * y
        g[..., 1] += a * x
    return g


def energy_hessian(
    m,
    params: MaterialParams,
    frame: FilmFrame,
    photo_state: PhotoAnisotropyState | None = None,
):
    """Euclidean 3x3 Hessian of total_energy at a single point m.

    The Zeeman term is linear in m and contributes nothing here (it still
    enters the curvature on the sphere through the radial gradient, which
    the landscape module handles).
    """
    m = np.asarray(m, dtype=float)
    if m.shape != (3,):
        raise ValueError("energy_hessian expects a single 3-vector")
    x, y, z = m
    k1 = params.k1
    hess = np.array(
        [
            [2 * k1 * (y * y + z * z), 4 * k1 * x * y, 4 * k1 * x * z],
            [4 * k1 * x * y, 2 * k1 * (z * z + x * x), 4 * k1 * y * z],
            [4 * k1 * x * z, 4 * k1 * y * z, 2 * k1 * (x * x + y * y)],
        ]
    )
    u = frame.uniaxial_axis
    hess += -2.0 * params.ku * np.outer(u, u)
    if params.include_demag:
        n = frame.film_normal
        hess += 4.0 * math.pi * params.ms**2 * np.outer(n, n)
    if photo_state is not None:
        a = float(photo_state.amplitude) * photo_state.cos2phi
        hess[0, 1] += a
        hess[1, 0] += a
    return hess


def effective_field(
    m,
    params: MaterialParams,
    frame: FilmFrame,
    h_applied=None,
    photo_state: PhotoAnisotropyState | None = None,
    check: bool = True,
):
    """Effective field H_eff = -(1/Ms) dE/dm in Oe, shape (..., 3)."""
    if check:
        m = check_unit(m)
    g = energy_gradient(m, params, frame, h_applied, photo_state)
    return -g / params.ms
